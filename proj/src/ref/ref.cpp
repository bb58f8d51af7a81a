#include "hgc/ref.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "../fft_internal.hpp"

namespace hgc::ref {
namespace {

constexpr double kPi = std::numbers::pi_v<double>;

std::vector<double> window_of(const StftConfig& cfg) {
  return cfg.window.empty() ? hann_window(cfg.win_length) : cfg.window;
}

}  // namespace

ComplexSpectrogram stft_naive_dft(const std::vector<double>& samples, const StftConfig& cfg) {
  const std::vector<double> w = window_of(cfg);
  const std::size_t win = static_cast<std::size_t>(cfg.win_length);
  const std::size_t hop = static_cast<std::size_t>(cfg.hop);
  const std::size_t fft = static_cast<std::size_t>(cfg.fft_size);
  if (samples.size() < win) throw ValidationError("input shorter than one window");
  const std::size_t frames = (samples.size() - win) / hop + 1;
  const std::size_t bins = fft / 2 + 1;

  ComplexSpectrogram spec(frames, bins);
  spec.config = cfg;
  spec.config.window = w;
  for (std::size_t t = 0; t < frames; ++t) {
    const std::size_t off = t * hop;
    for (std::size_t f = 0; f < bins; ++f) {
      std::complex<double> acc(0.0, 0.0);
      // Zero padding past the window never contributes, so stop at win.
      for (std::size_t n = 0; n < win; ++n) {
        const double ang = -2.0 * kPi * static_cast<double>(f) * static_cast<double>(n) /
                           static_cast<double>(fft);
        acc += samples[off + n] * w[n] * std::complex<double>(std::cos(ang), std::sin(ang));
      }
      spec.at(t, f) = acc;
    }
  }
  return spec;
}

std::vector<double> istft_naive(const ComplexSpectrogram& spec) {
  const std::vector<double> w = window_of(spec.config);
  const std::size_t win = static_cast<std::size_t>(spec.config.win_length);
  const std::size_t hop = static_cast<std::size_t>(spec.config.hop);
  const std::size_t fft = static_cast<std::size_t>(spec.config.fft_size);
  const std::size_t bins = fft / 2 + 1;
  if (spec.frames == 0) throw ValidationError("empty spectrogram");
  if (spec.bins != bins) throw ValidationError("bin count does not match config");

  const std::size_t frames = spec.frames;
  const std::size_t length = (frames - 1) * hop + win;

  // Same per-frame transform as the optimized path on purpose: the point of
  // this function is to scatter frame by frame, so a comparison against the
  // gather-style overlap-add checks only the reordering.
  std::vector<double> frame_time(frames * win);
  std::vector<std::complex<double>> buf(fft);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t f = 0; f < bins; ++f) buf[f] = spec.at(t, f);
    for (std::size_t f = bins; f < fft; ++f) buf[f] = std::conj(buf[fft - f]);
    detail::fft_inplace(buf, true);
    for (std::size_t n = 0; n < win; ++n) frame_time[t * win + n] = buf[n].real();
  }

  std::vector<double> norm(length, 0.0);
  std::vector<double> out(length, 0.0);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t n = 0; n < win; ++n) {
      out[t * hop + n] += w[n] * frame_time[t * win + n];
      norm[t * hop + n] += w[n] * w[n];
    }
  }
  for (std::size_t s = win; s + win < length; ++s) {
    if (norm[s] == 0.0) {
      throw ValidationError("window overlap never covers sample " + std::to_string(s) +
                            "; degenerate stft config");
    }
  }
  for (std::size_t s = 0; s < length; ++s) {
    if (norm[s] == 0.0) {
      out[s] = 0.0;
    } else {
      out[s] /= norm[s];
    }
  }
  return out;
}

Matrix significance_direct(const Matrix& mag, int sample_rate, std::size_t bins,
                           const IntegralMatrixOptions& opt, double log_floor) {
  if (mag.cols != bins) throw ValidationError("magnitude bin count does not match");
  const long rows = round_half_away(opt.max_hz / opt.resolution_hz);
  const long begin = round_half_away(opt.min_hz / opt.resolution_hz);
  const double res = opt.resolution_hz;
  const double sr = static_cast<double>(sample_rate);
  const double nbins = static_cast<double>(bins);

  Matrix q(mag.rows, static_cast<std::size_t>(rows));
  std::vector<double> lrow(bins);
  for (std::size_t t = 0; t < mag.rows; ++t) {
    for (std::size_t f = 0; f < bins; ++f) {
      const double m = mag.at(t, f) > log_floor ? mag.at(t, f) : log_floor;
      lrow[f] = std::log(m);
    }
    for (long c = begin; c < rows; ++c) {
      const double f_hz = res * static_cast<double>(c);
      const long harmonics = round_half_away(sr / f_hz);
      long last = 0;
      double acc = 0.0;
      for (long k = 1; k <= harmonics; ++k) {
        const long idx = round_half_away(f_hz * static_cast<double>(k) * nbins / sr);
        if (idx >= static_cast<long>(bins)) break;
        const double wk = 1.0 / std::sqrt(static_cast<double>(k));
        acc += wk * lrow[static_cast<std::size_t>(idx)];
        const long gap = idx - last;
        if (gap > 1) {
          const long i = last + round_half_away(static_cast<double>(gap) / 2.0);
          bool split = (gap % 2) != 0;
          if (opt.split_valley_on_even_gap) split = !split;
          if (split) {
            acc -= 0.5 * wk * lrow[static_cast<std::size_t>(i)];
            acc -= 0.5 * wk * lrow[static_cast<std::size_t>(i + 1)];
          } else {
            acc -= wk * lrow[static_cast<std::size_t>(i)];
          }
        } else {
          acc -= 0.5 * wk * lrow[static_cast<std::size_t>(idx)];
          acc -= 0.5 * wk * lrow[static_cast<std::size_t>(last)];
        }
        last = idx;
      }
      q.at(t, static_cast<std::size_t>(c)) = acc;
    }
  }
  return q;
}

EnergyStats corpus_stats_naive(const std::vector<Matrix>& clip_mags, double log_floor) {
  if (clip_mags.empty()) throw ValidationError("no clips");
  const std::size_t bins = clip_mags[0].cols;
  const std::size_t clips = clip_mags.size();

  // Per-clip time means of the floored log magnitude.
  std::vector<std::vector<double>> means(clips, std::vector<double>(bins, 0.0));
  for (std::size_t d = 0; d < clips; ++d) {
    const Matrix& m = clip_mags[d];
    if (m.cols != bins) throw ValidationError("clip bin counts disagree");
    if (m.rows == 0) throw ValidationError("empty clip");
    for (std::size_t t = 0; t < m.rows; ++t) {
      for (std::size_t f = 0; f < bins; ++f) {
        const double v = m.at(t, f) > log_floor ? m.at(t, f) : log_floor;
        means[d][f] += std::log(v);
      }
    }
    for (std::size_t f = 0; f < bins; ++f) means[d][f] /= static_cast<double>(m.rows);
  }

  EnergyStats stats;
  stats.mu.assign(bins, 0.0);
  stats.sigma.assign(bins, 0.0);
  stats.clip_count = clips;
  for (std::size_t f = 0; f < bins; ++f) {
    double mu = 0.0;
    for (std::size_t d = 0; d < clips; ++d) mu += means[d][f];
    mu /= static_cast<double>(clips);
    double var = 0.0;
    for (std::size_t d = 0; d < clips; ++d) {
      const double diff = means[d][f] - mu;
      var += diff * diff;
    }
    var /= static_cast<double>(clips);
    stats.mu[f] = mu;
    stats.sigma[f] = std::sqrt(var);
  }
  return stats;
}

Tensor3 causal_conv2d_naive(const Tensor3& x, const ConvSpec& spec) {
  const std::size_t out_bins = (x.bins - 1) / static_cast<std::size_t>(spec.stride_freq) + 1;
  const int pad_left = (spec.kf - 1) / 2;
  Tensor3 out(x.frames, out_bins, static_cast<std::size_t>(spec.out_channels));
  for (std::size_t t = 0; t < x.frames; ++t) {
    for (std::size_t fo = 0; fo < out_bins; ++fo) {
      for (int o = 0; o < spec.out_channels; ++o) {
        double acc = spec.bias[static_cast<std::size_t>(o)];
        for (int ci = 0; ci < spec.in_channels; ++ci) {
          for (int dt = 0; dt < spec.kt; ++dt) {
            const long long ti = static_cast<long long>(t) - (spec.kt - 1) + dt;
            if (ti < 0) continue;
            for (int df = 0; df < spec.kf; ++df) {
              const long long fi =
                  static_cast<long long>(fo) * spec.stride_freq - pad_left + df;
              if (fi < 0 || fi >= static_cast<long long>(x.bins)) continue;
              acc += spec.weights[((static_cast<std::size_t>(o) * spec.in_channels + ci) *
                                       spec.kt +
                                   dt) *
                                      spec.kf +
                                  df] *
                     x.at(static_cast<std::size_t>(ti), static_cast<std::size_t>(fi),
                          static_cast<std::size_t>(ci));
            }
          }
        }
        out.at(t, fo, static_cast<std::size_t>(o)) = acc;
      }
    }
  }
  return out;
}

std::complex<double> mask_apply_e_cell(std::complex<double> s, std::complex<double> m,
                                       const TanhShape& shape) {
  const double mag = std::abs(s) * (shape.post * std::tanh(shape.pre * std::abs(m)));
  const double ps = (s.real() == 0.0 && s.imag() == 0.0) ? 0.0 : std::atan2(s.imag(), s.real());
  const double pm = (m.real() == 0.0 && m.imag() == 0.0) ? 0.0 : std::atan2(m.imag(), m.real());
  const double phase = ps + pm;
  return {mag * std::cos(phase), mag * std::sin(phase)};
}

std::complex<double> mask_apply_m_cell(std::complex<double> s, double m) {
  return s * (1.0 + m);
}

int gate_cell(int vad, int vrd, int ra, int rh) { return vad * vrd * ra * rh; }

}  // namespace hgc::ref
