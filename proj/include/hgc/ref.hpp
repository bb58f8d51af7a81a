#pragma once

// Serial reference implementations. Naive algorithms, independent code
// paths, no OpenMP: the test suite and the benchmark compare the optimized
// kernels against these.

#include <complex>
#include <vector>

#include "hgc/common.hpp"
#include "hgc/compensator.hpp"
#include "hgc/harmonic.hpp"
#include "hgc/masking.hpp"
#include "hgc/sed.hpp"
#include "hgc/stft.hpp"

namespace hgc::ref {

// Direct O(N^2) DFT per frame.
ComplexSpectrogram stft_naive_dft(const std::vector<double>& samples, const StftConfig& cfg);

// Scatter-style overlap-add, one frame at a time.
std::vector<double> istft_naive(const ComplexSpectrogram& spec);

// Significance by re-deriving every peak/valley index per candidate and
// frame; never materializes the integral matrix.
Matrix significance_direct(const Matrix& mag, int sample_rate, std::size_t bins,
                           const IntegralMatrixOptions& opt, double log_floor);

// Plain two-pass mean/std loops.
EnergyStats corpus_stats_naive(const std::vector<Matrix>& clip_mags, double log_floor);

// Six nested loops, no padding tricks.
Tensor3 causal_conv2d_naive(const Tensor3& x, const ConvSpec& spec);

// Scalar per-cell mask evaluations.
std::complex<double> mask_apply_e_cell(std::complex<double> s, std::complex<double> m,
                                       const TanhShape& shape);
std::complex<double> mask_apply_m_cell(std::complex<double> s, double m);

// Scalar gate cell.
int gate_cell(int vad, int vrd, int ra, int rh);

}  // namespace hgc::ref
