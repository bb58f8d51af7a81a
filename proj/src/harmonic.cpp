#include "hgc/harmonic.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "hgc/common.hpp"

namespace hgc {
namespace {

void validate_options(int sample_rate, std::size_t bins, const IntegralMatrixOptions& opt) {
  if (opt.resolution_hz <= 0.0) throw ValidationError("candidate resolution must be positive");
  if (!(opt.min_hz > 0.0 && opt.min_hz < opt.max_hz)) {
    throw ValidationError("candidate range must satisfy 0 < min_hz < max_hz");
  }
  if (sample_rate <= static_cast<int>(opt.max_hz)) {
    throw ValidationError("sample_rate " + std::to_string(sample_rate) +
                          " must exceed the candidate ceiling " + std::to_string(opt.max_hz));
  }
  if (bins < 2) throw ValidationError("bin count must be at least 2");
}

std::vector<double> log_frame(const double* mag, std::size_t n, double floor_value) {
  std::vector<double> out(n);
  for (std::size_t f = 0; f < n; ++f) {
    const double m = mag[f] > floor_value ? mag[f] : floor_value;
    out[f] = std::log(m);
  }
  return out;
}

void check_finite(const Matrix& mag) {
  for (double v : mag.data) {
    if (!std::isfinite(v)) throw ValidationError("non-finite magnitude entry");
  }
}

}  // namespace

IntegralMatrix build_integral_matrix(int sample_rate, std::size_t bins,
                                     const IntegralMatrixOptions& opt) {
  validate_options(sample_rate, bins, opt);
  const long rows = round_half_away(opt.max_hz / opt.resolution_hz);
  const long begin = round_half_away(opt.min_hz / opt.resolution_hz);

  IntegralMatrix matrix;
  matrix.values = Matrix(static_cast<std::size_t>(rows), bins);
  matrix.sample_rate = sample_rate;
  matrix.options = opt;

  Matrix& u = matrix.values;
  const double res = opt.resolution_hz;
  const double sr = static_cast<double>(sample_rate);
  const double nbins = static_cast<double>(bins);

#pragma omp parallel for schedule(static)
  for (long f = begin; f < rows; ++f) {
    const double f_hz = res * static_cast<double>(f);
    const long harmonics = round_half_away(sr / f_hz);
    long last = 0;
    for (long k = 1; k <= harmonics; ++k) {
      const long idx = round_half_away(f_hz * static_cast<double>(k) * nbins / sr);
      // Rounding can push one past the loop bound; clip, don't wrap. Peak
      // indices only grow with k, so this also balances every +1/sqrt(k)
      // against its valley mass and keeps the row sum at zero.
      if (idx >= static_cast<long>(bins)) break;
      const double w = 1.0 / std::sqrt(static_cast<double>(k));
      const std::size_t row = static_cast<std::size_t>(f);
      u.at(row, static_cast<std::size_t>(idx)) += w;
      const long gap = idx - last;
      if (gap > 1) {
        const long i = last + round_half_away(static_cast<double>(gap) / 2.0);
        bool split = (gap % 2) != 0;  // printed rule: odd gaps split the valley
        if (opt.split_valley_on_even_gap) split = !split;
        if (split) {
          // i+1 <= idx whenever gap >= 3, so no clipping is needed here.
          u.at(row, static_cast<std::size_t>(i)) -= 0.5 * w;
          u.at(row, static_cast<std::size_t>(i + 1)) -= 0.5 * w;
        } else {
          u.at(row, static_cast<std::size_t>(i)) -= w;
        }
      } else {
        u.at(row, static_cast<std::size_t>(idx)) -= 0.5 * w;
        u.at(row, static_cast<std::size_t>(last)) -= 0.5 * w;
      }
      last = idx;
    }
  }
  return matrix;
}

SparseIntegralMatrix to_sparse(const IntegralMatrix& matrix) {
  SparseIntegralMatrix s;
  s.rows = matrix.values.rows;
  s.cols = matrix.values.cols;
  s.sample_rate = matrix.sample_rate;
  s.options = matrix.options;
  s.row_start.resize(s.rows + 1, 0);
  for (std::size_t r = 0; r < s.rows; ++r) {
    s.row_start[r] = s.col.size();
    for (std::size_t c = 0; c < s.cols; ++c) {
      const double v = matrix.values.at(r, c);
      if (v != 0.0) {
        s.col.push_back(static_cast<int>(c));
        s.value.push_back(v);
      }
    }
  }
  s.row_start[s.rows] = s.col.size();
  return s;
}

Matrix significance_spectrum(const Matrix& mag, const SparseIntegralMatrix& matrix,
                             double log_floor) {
  if (log_floor <= 0.0) throw ValidationError("log floor must be positive");
  if (mag.cols != matrix.cols) {
    throw ValidationError("magnitude has " + std::to_string(mag.cols) +
                          " bins, integral matrix has " + std::to_string(matrix.cols));
  }
  check_finite(mag);

  Matrix q(mag.rows, matrix.rows);
#pragma omp parallel for schedule(static)
  for (long long t = 0; t < static_cast<long long>(mag.rows); ++t) {
    const std::vector<double> lrow =
        log_frame(&mag.data[static_cast<std::size_t>(t) * mag.cols], mag.cols, log_floor);
    for (std::size_t r = 0; r < matrix.rows; ++r) {
      double acc = 0.0;
      const std::size_t end = matrix.row_start[r + 1];
      for (std::size_t e = matrix.row_start[r]; e < end; ++e) {
        acc += matrix.value[e] * lrow[static_cast<std::size_t>(matrix.col[e])];
      }
      q.at(static_cast<std::size_t>(t), r) = acc;
    }
  }
  return q;
}

Matrix significance_spectrum(const Matrix& mag, const IntegralMatrix& matrix,
                             double log_floor) {
  return significance_spectrum(mag, to_sparse(matrix), log_floor);
}

PitchTrack pick_pitch(const Matrix& significance, const IntegralMatrixOptions& opt) {
  const long rows = round_half_away(opt.max_hz / opt.resolution_hz);
  const long begin = round_half_away(opt.min_hz / opt.resolution_hz);
  if (significance.cols != static_cast<std::size_t>(rows)) {
    throw ValidationError("significance has " + std::to_string(significance.cols) +
                          " candidates, options expect " + std::to_string(rows));
  }
  PitchTrack track;
  track.pitch_hz.resize(significance.rows);
  track.candidate_index.resize(significance.rows);
  for (std::size_t t = 0; t < significance.rows; ++t) {
    long best = begin;
    double best_q = significance.at(t, static_cast<std::size_t>(begin));
    for (long c = begin + 1; c < rows; ++c) {
      const double v = significance.at(t, static_cast<std::size_t>(c));
      if (v > best_q) {  // strict, so ties keep the lowest candidate
        best_q = v;
        best = c;
      }
    }
    track.candidate_index[t] = static_cast<int>(best);
    track.pitch_hz[t] = static_cast<double>(best) * opt.resolution_hz;
  }
  return track;
}

BinaryRaster harmonic_raster(const PitchTrack& track, int sample_rate, std::size_t bins) {
  if (sample_rate <= 0) throw ValidationError("sample_rate must be positive");
  if (bins < 1) throw ValidationError("bin count must be at least 1");
  if (track.pitch_hz.size() != track.candidate_index.size()) {
    throw ValidationError("pitch track arrays disagree in length");
  }
  BinaryRaster raster(track.pitch_hz.size(), bins);
  const double sr = static_cast<double>(sample_rate);
  const double nbins = static_cast<double>(bins);
#pragma omp parallel for schedule(static)
  for (long long t = 0; t < static_cast<long long>(track.pitch_hz.size()); ++t) {
    const double p = track.pitch_hz[static_cast<std::size_t>(t)];
    if (p <= 0.0) continue;  // unvoiced frame stays all-zero
    const long harmonics = static_cast<long>(std::floor(sr / p));
    for (long k = 1; k <= harmonics; ++k) {
      const long idx = round_half_away(p * static_cast<double>(k) * nbins / sr);
      if (idx >= static_cast<long>(bins)) break;  // indices only grow with k
      raster.at(static_cast<std::size_t>(t), static_cast<std::size_t>(idx)) = 1;
    }
  }
  return raster;
}

void save_integral_matrix(const std::string& path, const IntegralMatrix& matrix) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  const char magic[4] = {'H', 'G', 'C', 'U'};
  out.write(magic, 4);
  const unsigned char version = 1;
  out.write(reinterpret_cast<const char*>(&version), 1);
  const std::uint32_t dims[3] = {static_cast<std::uint32_t>(matrix.values.rows),
                                 static_cast<std::uint32_t>(matrix.values.cols),
                                 static_cast<std::uint32_t>(matrix.sample_rate)};
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  std::vector<float> row(matrix.values.cols);
  for (std::size_t r = 0; r < matrix.values.rows; ++r) {
    for (std::size_t c = 0; c < matrix.values.cols; ++c) {
      row[c] = static_cast<float>(matrix.values.at(r, c));
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
  if (!out) throw IoError("write failure: " + path);
}

IntegralMatrix load_integral_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "HGCU", 4) != 0) {
    throw ValidationError("not an integral matrix file (bad magic): " + path);
  }
  unsigned char version = 0;
  in.read(reinterpret_cast<char*>(&version), 1);
  if (!in || version != 1) {
    throw ValidationError("unsupported integral matrix version in: " + path);
  }
  std::uint32_t dims[3] = {};
  in.read(reinterpret_cast<char*>(dims), sizeof(dims));
  if (!in) throw ValidationError("truncated integral matrix header in: " + path);

  IntegralMatrix matrix;
  matrix.values = Matrix(dims[0], dims[1]);
  matrix.sample_rate = static_cast<int>(dims[2]);
  std::vector<float> row(dims[1]);
  for (std::size_t r = 0; r < dims[0]; ++r) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(float)));
    if (!in) throw ValidationError("truncated integral matrix payload in: " + path);
    for (std::size_t c = 0; c < dims[1]; ++c) {
      matrix.values.at(r, c) = static_cast<double>(row[c]);
    }
  }
  return matrix;
}

void save_pitch_csv(const std::string& path, const PitchTrack& track,
                    const Matrix& significance) {
  if (significance.rows != track.pitch_hz.size()) {
    throw ValidationError("significance frame count does not match pitch track");
  }
  std::string text = "frame,pitch_hz,significance\n";
  char line[96];
  for (std::size_t t = 0; t < track.pitch_hz.size(); ++t) {
    const int c = track.candidate_index[t];
    const double q =
        c >= 0 && static_cast<std::size_t>(c) < significance.cols
            ? significance.at(t, static_cast<std::size_t>(c))
            : 0.0;
    std::snprintf(line, sizeof(line), "%zu,%.1f,%.9g\n", t, track.pitch_hz[t], q);
    text += line;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failure: " + path);
}

}  // namespace hgc
