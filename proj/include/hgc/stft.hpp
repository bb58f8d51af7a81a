#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "hgc/common.hpp"

namespace hgc {

struct StftConfig {
  int fft_size = 512;
  int win_length = 512;  // 32 ms at 16 kHz
  int hop = 128;         // win/4
  // Analysis window. Empty means symmetric Hann of win_length. Must be
  // symmetric and of length win_length when set.
  std::vector<double> window;
};

// w[n] = 0.5 (1 - cos(2 pi n / (N-1))), built by mirroring halves so
// w[i] == w[N-1-i] holds exactly.
std::vector<double> hann_window(int length);

struct ComplexSpectrogram {
  std::size_t frames = 0;
  std::size_t bins = 0;  // fft_size/2 + 1
  StftConfig config;     // carries the resolved window for inversion
  std::vector<std::complex<double>> data;  // row-major frames x bins

  ComplexSpectrogram() = default;
  ComplexSpectrogram(std::size_t t, std::size_t f)
      : frames(t), bins(f), data(t * f) {}

  std::complex<double>& at(std::size_t t, std::size_t f) { return data[t * bins + f]; }
  std::complex<double> at(std::size_t t, std::size_t f) const { return data[t * bins + f]; }
};

// Frame t covers samples [t*hop, t*hop + win); T = floor((N - win)/hop) + 1,
// no padding. Input shorter than one window is a ValidationError.
ComplexSpectrogram stft_forward(const std::vector<double>& samples, const StftConfig& cfg);

// Weighted overlap-add divided by the per-sample sum of squared window
// values; output length (T-1)*hop + win. A zero normalizer at an interior
// sample (inside [win, L-win)) means the config cannot reconstruct and is a
// ValidationError; the edge samples of a tapered window legitimately
// normalize to zero and emit 0.
std::vector<double> istft_inverse(const ComplexSpectrogram& spec);

// Magnitude^exponent with phase preserved bit-for-bit; (0,0) stays (0,0).
// Exponent must lie in (0, 1]; exponent 1 is the identity.
ComplexSpectrogram power_compress(const ComplexSpectrogram& spec, double exponent);

Matrix magnitude(const ComplexSpectrogram& spec);

}  // namespace hgc
