#include "hgc/sed.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hgc/common.hpp"
#include "hgc/parallel.hpp"

namespace hgc {
namespace {

double log_floored(double v, double floor_value) {
  return std::log(v > floor_value ? v : floor_value);
}

}  // namespace

EnergyStats corpus_stats(const std::vector<Matrix>& clip_mags, double log_floor) {
  if (clip_mags.empty()) throw ValidationError("corpus_stats needs at least one clip");
  if (log_floor <= 0.0) throw ValidationError("log floor must be positive");
  const std::size_t bins = clip_mags[0].cols;
  for (const Matrix& m : clip_mags) {
    if (m.cols != bins) {
      throw ValidationError("clip has " + std::to_string(m.cols) + " bins, expected " +
                            std::to_string(bins));
    }
    if (m.rows == 0) throw ValidationError("clip has no frames");
  }
  const std::size_t clips = clip_mags.size();

  // Per-clip, per-bin time means; clips are independent outputs.
  Matrix means(clips, bins);
#pragma omp parallel for schedule(static)
  for (long long d = 0; d < static_cast<long long>(clips); ++d) {
    const Matrix& m = clip_mags[static_cast<std::size_t>(d)];
    for (std::size_t f = 0; f < bins; ++f) {
      double acc = 0.0;
      for (std::size_t t = 0; t < m.rows; ++t) acc += log_floored(m.at(t, f), log_floor);
      means.at(static_cast<std::size_t>(d), f) = acc / static_cast<double>(m.rows);
    }
  }

  EnergyStats stats;
  stats.clip_count = clips;
  stats.mu.resize(bins);
  stats.sigma.resize(bins);
  // Across-clip reductions use a fixed pairwise tree, so the result is the
  // same for any thread count.
#pragma omp parallel for schedule(static)
  for (long long fi = 0; fi < static_cast<long long>(bins); ++fi) {
    const std::size_t f = static_cast<std::size_t>(fi);
    std::vector<double> column(clips);
    for (std::size_t d = 0; d < clips; ++d) column[d] = means.at(d, f);
    const double mu = pairwise_sum(column.data(), clips) / static_cast<double>(clips);
    for (std::size_t d = 0; d < clips; ++d) {
      const double dev = column[d] - mu;
      column[d] = dev * dev;
    }
    const double var = pairwise_sum(column.data(), clips) / static_cast<double>(clips);
    stats.mu[f] = mu;
    stats.sigma[f] = std::sqrt(var);
  }
  return stats;
}

Thresholds make_thresholds(const EnergyStats& stats, double epsilon_offset) {
  if (stats.mu.size() != stats.sigma.size()) {
    throw ValidationError("stats mu/sigma lengths disagree");
  }
  if (stats.mu.empty()) throw ValidationError("stats are empty");
  Thresholds thr;
  thr.epsilon_offset = epsilon_offset;
  thr.kappa.resize(stats.mu.size());
  for (std::size_t f = 0; f < stats.mu.size(); ++f) {
    thr.kappa[f] = stats.mu[f] + epsilon_offset * stats.sigma[f];
  }
  return thr;
}

BinaryRaster energy_labels(const Matrix& mag, const Thresholds& thr, double log_floor) {
  if (mag.cols != thr.kappa.size()) {
    throw ValidationError("magnitude has " + std::to_string(mag.cols) +
                          " bins, thresholds have " + std::to_string(thr.kappa.size()));
  }
  if (log_floor <= 0.0) throw ValidationError("log floor must be positive");
  BinaryRaster labels(mag.rows, mag.cols);
#pragma omp parallel for schedule(static)
  for (long long t = 0; t < static_cast<long long>(mag.rows); ++t) {
    for (std::size_t f = 0; f < mag.cols; ++f) {
      const double lv = log_floored(mag.at(static_cast<std::size_t>(t), f), log_floor);
      labels.at(static_cast<std::size_t>(t), f) = lv > thr.kappa[f] ? 1 : 0;
    }
  }
  return labels;
}

FrameFlags vad_track(const BinaryRaster& rb, int epsilon_count) {
  FrameFlags flags(rb.rows, 0);
  for (std::size_t t = 0; t < rb.rows; ++t) {
    long count = 0;
    for (std::size_t f = 0; f < rb.cols; ++f) count += rb.at(t, f);
    flags[t] = count > epsilon_count ? 1 : 0;
  }
  return flags;
}

FrameFlags vrd_track(const BinaryRaster& rb) {
  FrameFlags flags(rb.rows, 0);
  const std::size_t half = rb.cols / 2;
  for (std::size_t t = 0; t < rb.rows; ++t) {
    long low = 0;
    long high = 0;
    for (std::size_t f = 0; f < half; ++f) low += rb.at(t, f);
    for (std::size_t f = half; f < rb.cols; ++f) high += rb.at(t, f);
    flags[t] = high <= low ? 1 : 0;
  }
  return flags;
}

void save_stats_csv(const std::string& path, const EnergyStats& stats) {
  if (stats.mu.size() != stats.sigma.size()) {
    throw ValidationError("stats mu/sigma lengths disagree");
  }
  std::string text = "bin,mu,sigma\n";
  char line[96];
  for (std::size_t f = 0; f < stats.mu.size(); ++f) {
    std::snprintf(line, sizeof(line), "%zu,%.17g,%.17g\n", f, stats.mu[f], stats.sigma[f]);
    text += line;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failure: " + path);
}

EnergyStats load_stats_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "bin,mu,sigma") {
    throw ValidationError("malformed stats file (expected bin,mu,sigma header): " + path);
  }
  EnergyStats stats;
  std::size_t expected = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string bin_s, mu_s, sigma_s;
    if (!std::getline(row, bin_s, ',') || !std::getline(row, mu_s, ',') ||
        !std::getline(row, sigma_s)) {
      throw ValidationError("malformed stats row '" + line + "' in: " + path);
    }
    try {
      std::size_t used = 0;
      const unsigned long bin = std::stoul(bin_s, &used);
      if (used != bin_s.size() || bin != expected) {
        throw ValidationError("stats rows must list bins in order in: " + path);
      }
      used = 0;
      const double mu = std::stod(mu_s, &used);
      if (used != mu_s.size()) throw std::invalid_argument(mu_s);
      used = 0;
      const double sigma = std::stod(sigma_s, &used);
      if (used != sigma_s.size()) throw std::invalid_argument(sigma_s);
      stats.mu.push_back(mu);
      stats.sigma.push_back(sigma);
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception&) {
      throw ValidationError("malformed stats row '" + line + "' in: " + path);
    }
    ++expected;
  }
  if (stats.mu.empty()) throw ValidationError("stats file has no rows: " + path);
  stats.clip_count = 1;  // unknown from the file; at least one clip produced it
  return stats;
}

}  // namespace hgc
