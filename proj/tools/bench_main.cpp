#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "hgc/harmonic.hpp"
#include "hgc/parallel.hpp"
#include "hgc/ref.hpp"
#include "hgc/rng.hpp"
#include "hgc/stft.hpp"

namespace {

template <typename F>
double best_ms(F&& fn, int reps = 3) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  if (a.size() != b.size()) m = 1e300;
  return m;
}

void print_row(const char* name, double ref_ms, double opt_ms, double diff) {
  std::printf("%-28s %10.2f %10.2f %8.2fx   max|d|=%.3g\n", name, ref_ms, opt_ms,
              ref_ms / opt_ms, diff);
}

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  hgc::SplitMix64 rng(seed);
  std::vector<double> out(n);
  for (double& v : out) v = rng.uniform(-0.5, 0.5);
  return out;
}

}  // namespace

int main() {
  const int threads = hgc::max_threads();
  std::printf("kernels vs serial reference (%d thread%s)\n", threads, threads == 1 ? "" : "s");
  std::printf("%-28s %10s %10s %9s\n", "workload", "ref ms", "kernel ms", "speedup");

  const hgc::StftConfig cfg;
  const std::vector<double> clip = noise(16000, 42);

  hgc::ComplexSpectrogram spec;
  {
    const double opt = best_ms([&] { spec = hgc::stft_forward(clip, cfg); });
    hgc::ComplexSpectrogram ref_spec;
    const double ref = best_ms([&] { ref_spec = hgc::ref::stft_naive_dft(clip, cfg); });
    double diff = 0.0;
    for (std::size_t i = 0; i < spec.data.size(); ++i) {
      diff = std::max(diff, std::abs(spec.data[i] - ref_spec.data[i]));
    }
    print_row("stft 1s (fft vs dft)", ref, opt, diff);
  }

  {
    std::vector<double> opt_out;
    std::vector<double> ref_out;
    const double opt = best_ms([&] { opt_out = hgc::istft_inverse(spec); });
    const double ref = best_ms([&] { ref_out = hgc::ref::istft_naive(spec); });
    print_row("istft 1s (gather/scatter)", ref, opt, max_abs_diff(opt_out, ref_out));
  }

  {
    hgc::Matrix mag(50, 257);
    hgc::SplitMix64 rng(7);
    for (double& v : mag.data) v = rng.uniform(1e-4, 1.0);
    const hgc::IntegralMatrixOptions opt_cfg;
    const auto sparse = hgc::to_sparse(hgc::build_integral_matrix(8000, 257, opt_cfg));
    hgc::Matrix q_opt;
    hgc::Matrix q_ref;
    const double opt =
        best_ms([&] { q_opt = hgc::significance_spectrum(mag, sparse, hgc::kLogFloor); });
    const double ref = best_ms(
        [&] { q_ref = hgc::ref::significance_direct(mag, 8000, 257, opt_cfg, hgc::kLogFloor); });
    print_row("significance 50 frames", ref, opt, max_abs_diff(q_opt.data, q_ref.data));
  }

  {
    hgc::Tensor3 x(200, 257, 8);
    hgc::SplitMix64 rng(9);
    for (double& v : x.data) v = rng.uniform(-1.0, 1.0);
    hgc::ConvSpec conv;
    conv.in_channels = 8;
    conv.out_channels = 16;
    conv.kt = 2;
    conv.kf = 5;
    conv.weights.resize(16 * 8 * 2 * 5);
    conv.bias.resize(16);
    for (double& v : conv.weights) v = rng.uniform(-0.1, 0.1);
    for (double& v : conv.bias) v = rng.uniform(-0.1, 0.1);
    hgc::Tensor3 y_opt;
    hgc::Tensor3 y_ref;
    const double opt = best_ms([&] { y_opt = hgc::causal_conv2d(x, conv); });
    const double ref = best_ms([&] { y_ref = hgc::ref::causal_conv2d_naive(x, conv); });
    print_row("conv 200x257 8->16", ref, opt, max_abs_diff(y_opt.data, y_ref.data));
  }

  // Thread scaling on the stft; identical outputs are part of the contract.
  {
    const std::vector<double> longer = noise(64000, 43);
    hgc::set_threads(1);
    hgc::ComplexSpectrogram one;
    const double t1 = best_ms([&] { one = hgc::stft_forward(longer, cfg); });
    hgc::set_threads(threads);
    hgc::ComplexSpectrogram all;
    const double tn = best_ms([&] { all = hgc::stft_forward(longer, cfg); });
    double diff = 0.0;
    for (std::size_t i = 0; i < one.data.size(); ++i) {
      diff = std::max(diff, std::abs(one.data[i] - all.data[i]));
    }
    std::printf("%-28s %10.2f %10.2f %8.2fx   max|d|=%.3g (1 vs %d threads)\n", "stft 4s scaling",
                t1, tn, t1 / tn, diff, threads);
  }
  return 0;
}
