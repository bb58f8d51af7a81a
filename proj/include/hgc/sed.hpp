#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hgc/common.hpp"

namespace hgc {

// Per-bin corpus statistics of log magnitude: mu/sigma are taken across the
// per-clip time means, sigma is the population form (divide by clip count).
struct EnergyStats {
  std::vector<double> mu;
  std::vector<double> sigma;
  std::size_t clip_count = 0;
};

EnergyStats corpus_stats(const std::vector<Matrix>& clip_mags, double log_floor = kLogFloor);

struct Thresholds {
  std::vector<double> kappa;  // mu + epsilon_offset * sigma, elementwise
  double epsilon_offset = 0.0;
};

Thresholds make_thresholds(const EnergyStats& stats, double epsilon_offset);

// Label is 1 iff log(max(mag, floor)) is strictly greater than kappa.
BinaryRaster energy_labels(const Matrix& mag, const Thresholds& thr,
                           double log_floor = kLogFloor);

// Frame is active iff its label-row sum strictly exceeds epsilon_count.
FrameFlags vad_track(const BinaryRaster& rb, int epsilon_count = 24);

// Frame is voiced iff the high half [F/2, F) holds no more labels than the
// low half [0, F/2); ties count as voiced.
FrameFlags vrd_track(const BinaryRaster& rb);

// CSV "bin,mu,sigma" with full-precision values; load round-trips exactly.
void save_stats_csv(const std::string& path, const EnergyStats& stats);
EnergyStats load_stats_csv(const std::string& path);

}  // namespace hgc
