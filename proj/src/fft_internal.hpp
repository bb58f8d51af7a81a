#pragma once

#include <complex>
#include <vector>

namespace hgc::detail {

// In-place transform shared by the stft kernels and the reference
// overlap-add, so their comparison isolates the surrounding logic.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse);

}  // namespace hgc::detail
