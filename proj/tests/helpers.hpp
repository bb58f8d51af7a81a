#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "hgc/rng.hpp"

namespace testutil {

inline std::vector<double> sine(double hz, std::size_t samples, int rate = 16000,
                                double amp = 0.5, double phase = 0.0) {
  std::vector<double> out(samples);
  const double step = 2.0 * std::numbers::pi_v<double> * hz / rate;
  for (std::size_t i = 0; i < samples; ++i) {
    out[i] = amp * std::sin(step * static_cast<double>(i) + phase);
  }
  return out;
}

// Linear attack and release over `ramp` samples each.
inline void fade(std::vector<double>& x, std::size_t ramp) {
  if (ramp > x.size() / 2) ramp = x.size() / 2;
  for (std::size_t i = 0; i < ramp; ++i) {
    const double g = static_cast<double>(i) / static_cast<double>(ramp);
    x[i] *= g;
    x[x.size() - 1 - i] *= g;
  }
}

// Harmonic comb: amplitudes 1/sqrt(k), random phases, partials capped below
// cap_hz. Used as a synthetic voiced source.
inline std::vector<double> comb(double f0, int k_max, std::size_t samples, int rate,
                                hgc::SplitMix64& rng, double cap_hz = 3900.0) {
  std::vector<double> out(samples, 0.0);
  for (int k = 1; k <= k_max; ++k) {
    const double hz = f0 * k;
    if (hz >= cap_hz) break;
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi_v<double>);
    const double amp = 1.0 / std::sqrt(static_cast<double>(k));
    const double step = 2.0 * std::numbers::pi_v<double> * hz / rate;
    for (std::size_t i = 0; i < samples; ++i) {
      out[i] += amp * std::sin(step * static_cast<double>(i) + phase);
    }
  }
  return out;
}

// Raised-cosine attack and release over `ramp` samples each.
inline void fade_cos(std::vector<double>& x, std::size_t ramp) {
  if (ramp > x.size() / 2) ramp = x.size() / 2;
  for (std::size_t i = 0; i < ramp; ++i) {
    const double g = 0.5 * (1.0 - std::cos(std::numbers::pi_v<double> * static_cast<double>(i) /
                                           static_cast<double>(ramp)));
    x[i] *= g;
    x[x.size() - 1 - i] *= g;
  }
}

inline double rms(const std::vector<double>& x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

inline void scale_to_peak(std::vector<double>& x, double peak) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  if (m == 0.0) return;
  const double g = peak / m;
  for (double& v : x) v *= g;
}

// Clean voiced source for the oracle experiments: pitch drawn from the seed
// in [80, 300] Hz, up to 12 partials at 1/sqrt(k) below 3900 Hz, 10 ms
// raised-cosine fades, peak 0.3.
inline std::vector<double> oracle_clean_clip(std::uint64_t seed, std::size_t samples = 16000) {
  hgc::SplitMix64 rng(seed);
  const double f0 = rng.uniform(80.0, 300.0);
  std::vector<double> x = comb(f0, 12, samples, 16000, rng);
  fade_cos(x, 160);
  scale_to_peak(x, 0.3);
  return x;
}

inline std::vector<double> gauss_noise(std::uint64_t seed, double std_dev,
                                       std::size_t samples) {
  hgc::SplitMix64 rng(seed);
  std::vector<double> x(samples);
  for (double& v : x) v = std_dev * rng.gauss();
  return x;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Scratch directory under the test working directory.
inline std::string tmp_dir(const std::string& name) {
  const std::filesystem::path p = std::filesystem::path("test_tmp") / name;
  std::filesystem::create_directories(p);
  return p.string();
}

inline std::string tmp_path(const std::string& dir_name, const std::string& file) {
  return (std::filesystem::path(tmp_dir(dir_name)) / file).string();
}

}  // namespace testutil
