#include "hgc/compensator.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "hgc/common.hpp"
#include "hgc/rng.hpp"

namespace hgc {
namespace {

void validate_conv(const ConvSpec& spec, std::size_t in_channels) {
  if (spec.in_channels <= 0 || spec.out_channels <= 0) {
    throw ValidationError("conv channel counts must be positive");
  }
  if (spec.kt <= 0 || spec.kf <= 0) throw ValidationError("conv kernel sizes must be positive");
  if (spec.stride_freq <= 0) throw ValidationError("conv stride must be positive");
  if (static_cast<std::size_t>(spec.in_channels) != in_channels) {
    throw ValidationError("conv expects " + std::to_string(spec.in_channels) +
                          " input channels, tensor has " + std::to_string(in_channels));
  }
  const std::size_t want = static_cast<std::size_t>(spec.out_channels) *
                           static_cast<std::size_t>(spec.in_channels) *
                           static_cast<std::size_t>(spec.kt) * static_cast<std::size_t>(spec.kf);
  if (spec.weights.size() != want) {
    throw ValidationError("conv weight count " + std::to_string(spec.weights.size()) +
                          " does not match shape (" + std::to_string(want) + " expected)");
  }
  if (spec.bias.size() != static_cast<std::size_t>(spec.out_channels)) {
    throw ValidationError("conv bias count " + std::to_string(spec.bias.size()) +
                          " does not match out_channels " + std::to_string(spec.out_channels));
  }
}

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

ConvSpec make_conv(SplitMix64& rng, int in, int out, int kt, int kf) {
  ConvSpec c;
  c.in_channels = in;
  c.out_channels = out;
  c.kt = kt;
  c.kf = kf;
  c.weights.resize(static_cast<std::size_t>(out) * in * kt * kf);
  c.bias.resize(static_cast<std::size_t>(out));
  for (double& w : c.weights) w = rng.uniform(-0.1, 0.1);
  for (double& b : c.bias) b = rng.uniform(-0.1, 0.1);
  return c;
}

void write_conv(std::ofstream& out, const ConvSpec& c) {
  const std::uint32_t dims[4] = {
      static_cast<std::uint32_t>(c.out_channels), static_cast<std::uint32_t>(c.in_channels),
      static_cast<std::uint32_t>(c.kt), static_cast<std::uint32_t>(c.kf)};
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  std::vector<float> buf(c.weights.begin(), c.weights.end());
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
  buf.assign(c.bias.begin(), c.bias.end());
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
}

}  // namespace

Tensor3 causal_conv2d(const Tensor3& x, const ConvSpec& spec) {
  validate_conv(spec, x.channels);
  if (x.frames == 0 || x.bins == 0) throw ValidationError("empty tensor");
  const std::size_t out_bins =
      (x.bins - 1) / static_cast<std::size_t>(spec.stride_freq) + 1;
  const int pad_left = (spec.kf - 1) / 2;
  Tensor3 out(x.frames, out_bins, static_cast<std::size_t>(spec.out_channels));

  const int in_ch = spec.in_channels;
  const int kt = spec.kt;
  const int kf = spec.kf;

#pragma omp parallel for schedule(static)
  for (long long t = 0; t < static_cast<long long>(x.frames); ++t) {
    for (std::size_t fo = 0; fo < out_bins; ++fo) {
      for (int o = 0; o < spec.out_channels; ++o) {
        // Accumulation order is fixed: bias, then ci -> dt -> df.
        double acc = spec.bias[static_cast<std::size_t>(o)];
        for (int ci = 0; ci < in_ch; ++ci) {
          for (int dt = 0; dt < kt; ++dt) {
            const long long ti = t - (kt - 1) + dt;  // only past frames
            if (ti < 0) continue;
            for (int df = 0; df < kf; ++df) {
              const long long fi =
                  static_cast<long long>(fo) * spec.stride_freq - pad_left + df;
              if (fi < 0 || fi >= static_cast<long long>(x.bins)) continue;
              const double wv =
                  spec.weights[((static_cast<std::size_t>(o) * in_ch + ci) * kt + dt) * kf +
                               df];
              acc += wv * x.at(static_cast<std::size_t>(ti), static_cast<std::size_t>(fi),
                               static_cast<std::size_t>(ci));
            }
          }
        }
        out.at(static_cast<std::size_t>(t), fo, static_cast<std::size_t>(o)) = acc;
      }
    }
  }
  return out;
}

Tensor3 prelu(const Tensor3& x, double negative_slope) {
  Tensor3 out(x.frames, x.bins, x.channels);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(x.data.size()); ++i) {
    const double v = x.data[static_cast<std::size_t>(i)];
    out.data[static_cast<std::size_t>(i)] = v < 0.0 ? negative_slope * v : v;
  }
  return out;
}

Tensor3 sigmoid(const Tensor3& x) {
  Tensor3 out(x.frames, x.bins, x.channels);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(x.data.size()); ++i) {
    out.data[static_cast<std::size_t>(i)] = stable_sigmoid(x.data[static_cast<std::size_t>(i)]);
  }
  return out;
}

Tensor3 gcb_forward(const Tensor3& x, const BinaryRaster& gate, const GcbState& state,
                    bool final_block) {
  if (gate.rows != x.frames || gate.cols != x.bins) {
    throw ValidationError("gate is " + std::to_string(gate.rows) + "x" +
                          std::to_string(gate.cols) + ", input is " +
                          std::to_string(x.frames) + "x" + std::to_string(x.bins));
  }
  if (static_cast<std::size_t>(state.attention.out_channels) != x.channels) {
    throw ValidationError("attention must emit one map per input channel (got " +
                          std::to_string(state.attention.out_channels) + " for " +
                          std::to_string(x.channels) + " channels)");
  }
  if (state.attention.stride_freq != 1) {
    throw ValidationError("attention conv must keep the bin count (stride 1)");
  }

  // Gate channel first, then the input channels.
  Tensor3 cat(x.frames, x.bins, x.channels + 1);
#pragma omp parallel for schedule(static)
  for (long long t = 0; t < static_cast<long long>(x.frames); ++t) {
    for (std::size_t f = 0; f < x.bins; ++f) {
      cat.at(static_cast<std::size_t>(t), f, 0) =
          static_cast<double>(gate.at(static_cast<std::size_t>(t), f));
      for (std::size_t c = 0; c < x.channels; ++c) {
        cat.at(static_cast<std::size_t>(t), f, c + 1) =
            x.at(static_cast<std::size_t>(t), f, c);
      }
    }
  }

  const Tensor3 alpha = sigmoid(causal_conv2d(cat, state.attention));
  Tensor3 gated(x.frames, x.bins, x.channels);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(x.data.size()); ++i) {
    gated.data[static_cast<std::size_t>(i)] =
        x.data[static_cast<std::size_t>(i)] * alpha.data[static_cast<std::size_t>(i)];
  }

  const Tensor3 m = causal_conv2d(gated, state.main);
  if (state.residual.stride_freq != 1) {
    throw ValidationError("residual conv must keep the bin count (stride 1)");
  }
  if (state.residual.out_channels != state.main.out_channels) {
    throw ValidationError("residual conv must keep the channel count (" +
                          std::to_string(state.residual.out_channels) + " vs " +
                          std::to_string(state.main.out_channels) + ")");
  }

  if (!final_block) {
    const Tensor3 a = prelu(m, 0.25);
    const Tensor3 r = causal_conv2d(a, state.residual);
    Tensor3 z(a.frames, a.bins, a.channels);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(a.data.size()); ++i) {
      z.data[static_cast<std::size_t>(i)] =
          a.data[static_cast<std::size_t>(i)] + r.data[static_cast<std::size_t>(i)];
    }
    return z;
  }

  // Final block: sigmoid after the residual add, so outputs stay in (0, 1).
  const Tensor3 r = causal_conv2d(m, state.residual);
  Tensor3 z(m.frames, m.bins, m.channels);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(m.data.size()); ++i) {
    z.data[static_cast<std::size_t>(i)] = stable_sigmoid(
        m.data[static_cast<std::size_t>(i)] + r.data[static_cast<std::size_t>(i)]);
  }
  return z;
}

MagnitudeMask ghcm_forward(const Matrix& mag, const BinaryRaster& gate, const GhcmState& net) {
  if (net.blocks.empty()) throw ValidationError("network has no blocks");
  Tensor3 x(mag.rows, mag.cols, 1);
  for (std::size_t i = 0; i < mag.data.size(); ++i) x.data[i] = mag.data[i];
  for (std::size_t b = 0; b < net.blocks.size(); ++b) {
    x = gcb_forward(x, gate, net.blocks[b], b + 1 == net.blocks.size());
  }
  if (x.channels != 1) {
    throw ValidationError("final block must end at one channel, got " +
                          std::to_string(x.channels));
  }
  MagnitudeMask mask(x.frames, x.bins);
  mask.data = std::move(x.data);
  return mask;
}

GhcmState make_default_ghcm(std::uint64_t seed) {
  SplitMix64 rng(seed);
  const int chain[4] = {1, 8, 16, 1};
  GhcmState net;
  for (int b = 0; b < 3; ++b) {
    const int in = chain[b];
    const int out = chain[b + 1];
    GcbState block;
    block.attention = make_conv(rng, in + 1, in, 1, 1);
    block.main = make_conv(rng, in, out, 2, 5);
    block.residual = make_conv(rng, out, out, 2, 5);
    net.blocks.push_back(std::move(block));
  }
  return net;
}

void save_ghcm(const std::string& path, const GhcmState& net) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  const char magic[4] = {'H', 'G', 'C', 'W'};
  out.write(magic, 4);
  const unsigned char version = 1;
  out.write(reinterpret_cast<const char*>(&version), 1);
  for (const GcbState& block : net.blocks) {
    write_conv(out, block.attention);
    write_conv(out, block.main);
    write_conv(out, block.residual);
  }
  if (!out) throw IoError("write failure: " + path);
}

GhcmState load_ghcm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "HGCW", 4) != 0) {
    throw ValidationError("not a weights file (bad magic): " + path);
  }
  unsigned char version = 0;
  in.read(reinterpret_cast<char*>(&version), 1);
  if (!in || version != 1) throw ValidationError("unsupported weights version in: " + path);

  std::vector<ConvSpec> convs;
  for (;;) {
    std::uint32_t dims[4] = {};
    in.read(reinterpret_cast<char*>(dims), sizeof(dims));
    if (in.gcount() == 0 && in.eof()) break;
    if (!in) throw ValidationError("truncated conv header in: " + path);
    ConvSpec c;
    c.out_channels = static_cast<int>(dims[0]);
    c.in_channels = static_cast<int>(dims[1]);
    c.kt = static_cast<int>(dims[2]);
    c.kf = static_cast<int>(dims[3]);
    if (c.out_channels <= 0 || c.in_channels <= 0 || c.kt <= 0 || c.kf <= 0) {
      throw ValidationError("invalid conv shape in: " + path);
    }
    const std::size_t wn = static_cast<std::size_t>(c.out_channels) * c.in_channels *
                           c.kt * c.kf;
    std::vector<float> buf(wn);
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(wn * sizeof(float)));
    if (!in) throw ValidationError("truncated conv weights in: " + path);
    c.weights.assign(buf.begin(), buf.end());
    buf.resize(static_cast<std::size_t>(c.out_channels));
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!in) throw ValidationError("truncated conv bias in: " + path);
    c.bias.assign(buf.begin(), buf.end());
    convs.push_back(std::move(c));
  }
  if (convs.empty() || convs.size() % 3 != 0) {
    throw ValidationError("weights file must hold three convs per block, got " +
                          std::to_string(convs.size()) + ": " + path);
  }
  GhcmState net;
  for (std::size_t i = 0; i < convs.size(); i += 3) {
    GcbState block;
    block.attention = std::move(convs[i]);
    block.main = std::move(convs[i + 1]);
    block.residual = std::move(convs[i + 2]);
    net.blocks.push_back(std::move(block));
  }
  return net;
}

}  // namespace hgc
