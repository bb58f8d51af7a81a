#include "hgc/stft.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "hgc/common.hpp"
#include "fft_internal.hpp"

namespace hgc {
namespace {

constexpr double kPi = std::numbers::pi_v<double>;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

namespace detail {

// Iterative radix-2; falls back to a direct DFT for other sizes.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  if (!is_pow2(n)) {
    std::vector<std::complex<double>> out(n);
    const double sign = inverse ? 2.0 * kPi / static_cast<double>(n)
                                : -2.0 * kPi / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
      std::complex<double> acc(0.0, 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        const double ang = sign * static_cast<double>(k) * static_cast<double>(j);
        acc += a[j] * std::complex<double>(std::cos(ang), std::sin(ang));
      }
      out[k] = acc;
    }
    a = std::move(out);
  } else {
    for (std::size_t i = 1, j = 0; i < n; ++i) {
      std::size_t bit = n >> 1;
      for (; j & bit; bit >>= 1) j ^= bit;
      j ^= bit;
      if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
      const double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
      const std::complex<double> wlen(std::cos(ang), std::sin(ang));
      for (std::size_t i = 0; i < n; i += len) {
        std::complex<double> w(1.0, 0.0);
        for (std::size_t j = 0; j < len / 2; ++j) {
          const std::complex<double> u = a[i + j];
          const std::complex<double> v = a[i + j + len / 2] * w;
          a[i + j] = u + v;
          a[i + j + len / 2] = u - v;
          w *= wlen;
        }
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& z : a) z *= inv;
  }
}

}  // namespace detail

namespace {

std::vector<double> resolve_window(const StftConfig& cfg) {
  if (cfg.win_length <= 0) throw ValidationError("win_length must be positive");
  if (cfg.hop <= 0) throw ValidationError("hop must be positive");
  if (cfg.fft_size < cfg.win_length) {
    throw ValidationError("fft_size " + std::to_string(cfg.fft_size) +
                          " smaller than win_length " + std::to_string(cfg.win_length));
  }
  if (cfg.win_length % cfg.hop != 0) {
    throw ValidationError("hop " + std::to_string(cfg.hop) + " does not divide win_length " +
                          std::to_string(cfg.win_length));
  }
  std::vector<double> w = cfg.window.empty() ? hann_window(cfg.win_length) : cfg.window;
  if (w.size() != static_cast<std::size_t>(cfg.win_length)) {
    throw ValidationError("window length " + std::to_string(w.size()) +
                          " does not match win_length " + std::to_string(cfg.win_length));
  }
  for (std::size_t i = 0; i < w.size() / 2; ++i) {
    if (w[i] != w[w.size() - 1 - i]) throw ValidationError("window must be symmetric");
  }
  return w;
}

}  // namespace

std::vector<double> hann_window(int length) {
  if (length <= 0) throw ValidationError("window length must be positive");
  std::vector<double> w(static_cast<std::size_t>(length), 1.0);
  if (length == 1) return w;
  // Mirrored halves keep the symmetry exact in floating point.
  for (int i = 0; i < length / 2; ++i) {
    const double v =
        0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) / (length - 1)));
    w[static_cast<std::size_t>(i)] = v;
    w[static_cast<std::size_t>(length - 1 - i)] = v;
  }
  if (length % 2 == 1) w[static_cast<std::size_t>(length / 2)] = 1.0;
  return w;
}

ComplexSpectrogram stft_forward(const std::vector<double>& samples, const StftConfig& cfg) {
  const std::vector<double> w = resolve_window(cfg);
  const std::size_t win = static_cast<std::size_t>(cfg.win_length);
  const std::size_t hop = static_cast<std::size_t>(cfg.hop);
  const std::size_t fft = static_cast<std::size_t>(cfg.fft_size);
  if (samples.size() < win) {
    throw ValidationError("input has " + std::to_string(samples.size()) +
                          " samples, shorter than one window of " + std::to_string(win));
  }
  const std::size_t frames = (samples.size() - win) / hop + 1;
  const std::size_t bins = fft / 2 + 1;

  ComplexSpectrogram spec(frames, bins);
  spec.config = cfg;
  spec.config.window = w;  // resolved window rides along for inversion

#pragma omp parallel for schedule(static)
  for (long long t = 0; t < static_cast<long long>(frames); ++t) {
    std::vector<std::complex<double>> buf(fft, std::complex<double>(0.0, 0.0));
    const std::size_t off = static_cast<std::size_t>(t) * hop;
    for (std::size_t n = 0; n < win; ++n) {
      buf[n] = std::complex<double>(samples[off + n] * w[n], 0.0);
    }
    detail::fft_inplace(buf, false);
    for (std::size_t f = 0; f < bins; ++f) {
      spec.at(static_cast<std::size_t>(t), f) = buf[f];
    }
  }
  return spec;
}

std::vector<double> istft_inverse(const ComplexSpectrogram& spec) {
  const std::vector<double> w = resolve_window(spec.config);
  const std::size_t win = static_cast<std::size_t>(spec.config.win_length);
  const std::size_t hop = static_cast<std::size_t>(spec.config.hop);
  const std::size_t fft = static_cast<std::size_t>(spec.config.fft_size);
  const std::size_t bins = fft / 2 + 1;
  if (spec.frames == 0) throw ValidationError("empty spectrogram");
  if (spec.bins != bins) {
    throw ValidationError("spectrogram has " + std::to_string(spec.bins) +
                          " bins, config expects " + std::to_string(bins));
  }
  for (const auto& z : spec.data) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw ValidationError("non-finite spectrogram entry");
    }
  }

  const std::size_t frames = spec.frames;
  const std::size_t length = (frames - 1) * hop + win;

  // Per-frame inverse transforms first; the overlap-add below gathers from
  // this buffer per output sample in ascending frame order, which keeps the
  // summation order fixed for any thread count.
  std::vector<double> frame_time(frames * win);
#pragma omp parallel for schedule(static)
  for (long long t = 0; t < static_cast<long long>(frames); ++t) {
    std::vector<std::complex<double>> buf(fft);
    for (std::size_t f = 0; f < bins; ++f) buf[f] = spec.at(static_cast<std::size_t>(t), f);
    for (std::size_t f = bins; f < fft; ++f) buf[f] = std::conj(buf[fft - f]);
    detail::fft_inplace(buf, true);
    for (std::size_t n = 0; n < win; ++n) {
      frame_time[static_cast<std::size_t>(t) * win + n] = buf[n].real();
    }
  }

  std::vector<double> norm(length, 0.0);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t n = 0; n < win; ++n) norm[t * hop + n] += w[n] * w[n];
  }
  for (std::size_t s = win; s + win < length; ++s) {
    if (norm[s] == 0.0) {
      throw ValidationError("window overlap never covers sample " + std::to_string(s) +
                            "; degenerate stft config");
    }
  }

  std::vector<double> out(length, 0.0);
#pragma omp parallel for schedule(static)
  for (long long si = 0; si < static_cast<long long>(length); ++si) {
    const std::size_t s = static_cast<std::size_t>(si);
    if (norm[s] == 0.0) continue;  // tapered window edge, emits 0
    const std::size_t t_lo = s >= win ? (s - win) / hop + 1 : 0;
    const std::size_t t_hi = s / hop < frames - 1 ? s / hop : frames - 1;
    double acc = 0.0;
    for (std::size_t t = t_lo; t <= t_hi; ++t) {
      const std::size_t n = s - t * hop;
      acc += w[n] * frame_time[t * win + n];
    }
    out[s] = acc / norm[s];
  }
  return out;
}

ComplexSpectrogram power_compress(const ComplexSpectrogram& spec, double exponent) {
  if (!(exponent > 0.0 && exponent <= 1.0)) {
    throw ValidationError("compression exponent must lie in (0, 1]");
  }
  ComplexSpectrogram out(spec.frames, spec.bins);
  out.config = spec.config;
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(spec.data.size()); ++i) {
    const std::complex<double> z = spec.data[static_cast<std::size_t>(i)];
    const double m = std::abs(z);
    if (m == 0.0) {
      out.data[static_cast<std::size_t>(i)] = std::complex<double>(0.0, 0.0);
    } else {
      // scale = m^(e-1); exponent 1 gives pow(m, 0) == 1 and the identity.
      out.data[static_cast<std::size_t>(i)] = z * std::pow(m, exponent - 1.0);
    }
  }
  return out;
}

Matrix magnitude(const ComplexSpectrogram& spec) {
  Matrix mag(spec.frames, spec.bins);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(spec.data.size()); ++i) {
    mag.data[static_cast<std::size_t>(i)] = std::abs(spec.data[static_cast<std::size_t>(i)]);
  }
  return mag;
}

}  // namespace hgc
