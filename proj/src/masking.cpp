#include "hgc/masking.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "hgc/common.hpp"

namespace hgc {
namespace {

double safe_phase(std::complex<double> z) {
  // atan2(+-0, +-0) has signed-zero quirks; an exact zero cell has phase 0.
  if (z.real() == 0.0 && z.imag() == 0.0) return 0.0;
  return std::atan2(z.imag(), z.real());
}

void check_same_shape(const ComplexSpectrogram& a, const ComplexSpectrogram& b,
                      const char* what) {
  if (a.frames != b.frames || a.bins != b.bins) {
    throw ValidationError(std::string(what) + " is " + std::to_string(b.frames) + "x" +
                          std::to_string(b.bins) + ", spectrogram is " +
                          std::to_string(a.frames) + "x" + std::to_string(a.bins));
  }
}

}  // namespace

ComplexSpectrogram mask_apply_e(const ComplexSpectrogram& s, const ComplexSpectrogram& mask,
                                const TanhShape& shape) {
  check_same_shape(s, mask, "mask");
  if (!std::isfinite(shape.pre) || !std::isfinite(shape.post)) {
    throw ValidationError("tanh shape parameters must be finite");
  }
  ComplexSpectrogram out(s.frames, s.bins);
  out.config = s.config;
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(s.data.size()); ++i) {
    const std::size_t idx = static_cast<std::size_t>(i);
    const std::complex<double> sv = s.data[idx];
    const std::complex<double> mv = mask.data[idx];
    const double mag = std::abs(sv) * (shape.post * std::tanh(shape.pre * std::abs(mv)));
    const double phase = safe_phase(sv) + safe_phase(mv);
    out.data[idx] = std::complex<double>(mag * std::cos(phase), mag * std::sin(phase));
  }
  return out;
}

ComplexSpectrogram mask_apply_m(const ComplexSpectrogram& s, const MagnitudeMask& mask) {
  if (s.frames != mask.frames || s.bins != mask.bins) {
    throw ValidationError("mask is " + std::to_string(mask.frames) + "x" +
                          std::to_string(mask.bins) + ", spectrogram is " +
                          std::to_string(s.frames) + "x" + std::to_string(s.bins));
  }
  for (double v : mask.data) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ValidationError("mask value " + std::to_string(v) + " outside [0, 1]");
    }
  }
  ComplexSpectrogram out(s.frames, s.bins);
  out.config = s.config;
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(s.data.size()); ++i) {
    const std::size_t idx = static_cast<std::size_t>(i);
    // Real scaling keeps the phase exactly; a zero mask multiplies by 1.0
    // and returns the input bit-for-bit.
    out.data[idx] = s.data[idx] * (1.0 + mask.data[idx]);
  }
  return out;
}

}  // namespace hgc
