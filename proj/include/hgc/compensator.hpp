#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hgc/common.hpp"
#include "hgc/masking.hpp"

namespace hgc {

// Frames x bins x channels, channel fastest.
struct Tensor3 {
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::size_t channels = 0;
  std::vector<double> data;

  Tensor3() = default;
  Tensor3(std::size_t t, std::size_t f, std::size_t c)
      : frames(t), bins(f), channels(c), data(t * f * c, 0.0) {}

  double& at(std::size_t t, std::size_t f, std::size_t c) {
    return data[(t * bins + f) * channels + c];
  }
  double at(std::size_t t, std::size_t f, std::size_t c) const {
    return data[(t * bins + f) * channels + c];
  }
};

struct ConvSpec {
  int in_channels = 0;
  int out_channels = 0;
  int kt = 1;  // taps along time, all in the past
  int kf = 1;  // taps along frequency, centered
  int stride_freq = 1;
  std::vector<double> weights;  // [out][in][kt][kf]
  std::vector<double> bias;     // [out]
};

// Causal in time: output frame t sees input frames t-kt+1..t only (zero
// padded before frame 0). Frequency is same-padded: pad_left = (kf-1)/2,
// pad_right = kf-1-pad_left, output bins = (F-1)/stride + 1. Accumulation
// order is fixed (bias, then in-channel, time tap, frequency tap), so
// results never depend on thread count.
Tensor3 causal_conv2d(const Tensor3& x, const ConvSpec& spec);

Tensor3 prelu(const Tensor3& x, double negative_slope = 0.25);
Tensor3 sigmoid(const Tensor3& x);

// One gated compensation block: attention from cat(gate, x), then the main
// causal conv, then a residual conv.
struct GcbState {
  ConvSpec attention;  // in = x.channels + 1, out = x.channels, usually 1x1
  ConvSpec main;
  ConvSpec residual;
};

// alpha = sigmoid(attention(cat(gate, x))), gated input x*alpha runs through
// main. Non-final blocks apply prelu then add the residual conv; the final
// block applies sigmoid after the residual add so outputs live in (0, 1).
Tensor3 gcb_forward(const Tensor3& x, const BinaryRaster& gate, const GcbState& state,
                    bool final_block);

struct GhcmState {
  std::vector<GcbState> blocks;
};

// Stacks blocks over the magnitude input (one channel); the last block is
// final and must end at one channel, which is squeezed into the mask.
MagnitudeMask ghcm_forward(const Matrix& mag, const BinaryRaster& gate, const GhcmState& net);

// Three blocks, channels 1 -> 8 -> 16 -> 1, 1x1 attentions, kt=2 kf=5
// elsewhere. Weights drawn from SplitMix64(seed), uniform [-0.1, 0.1], in
// block order: attention weights, attention bias, main weights, main bias,
// residual weights, residual bias.
GhcmState make_default_ghcm(std::uint64_t seed);

// Binary container: magic "HGCW", version byte 1, then per conv u32
// out/in/kt/kf followed by f32 weights and f32 biases; convs are read until
// EOF and grouped in threes (attention, main, residual) per block.
void save_ghcm(const std::string& path, const GhcmState& net);
GhcmState load_ghcm(const std::string& path);

}  // namespace hgc
