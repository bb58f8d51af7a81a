#pragma once

#include "hgc/common.hpp"
#include "hgc/stft.hpp"

namespace hgc {

// Output magnitude = |S| * post * tanh(pre * |M|); defaults are the plain
// tanh bound.
struct TanhShape {
  double pre = 1.0;
  double post = 1.0;
};

// Complex masking: magnitude bounded through tanh, phases added. The phase
// of an exact (0,0) entry is defined as 0.
ComplexSpectrogram mask_apply_e(const ComplexSpectrogram& s, const ComplexSpectrogram& mask,
                                const TanhShape& shape = {});

// Magnitude compensation mask, entries in [0, 1].
struct MagnitudeMask {
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::vector<double> data;

  MagnitudeMask() = default;
  MagnitudeMask(std::size_t t, std::size_t f) : frames(t), bins(f), data(t * f, 0.0) {}

  double& at(std::size_t t, std::size_t f) { return data[t * bins + f]; }
  double at(std::size_t t, std::size_t f) const { return data[t * bins + f]; }
};

// Additive compensation: out = (1 + m) * s per cell. Phase is untouched and
// magnitudes scale exactly; a zero mask returns s bit-for-bit. Mask entries
// outside [0, 1] are a ValidationError.
ComplexSpectrogram mask_apply_m(const ComplexSpectrogram& s, const MagnitudeMask& mask);

}  // namespace hgc
