#include <cmath>
#include <complex>

#include "doctest.h"
#include "hgc/common.hpp"
#include "hgc/masking.hpp"
#include "hgc/ref.hpp"
#include "hgc/rng.hpp"
#include "hgc/stft.hpp"

using hgc::ComplexSpectrogram;
using hgc::MagnitudeMask;
using hgc::TanhShape;
using hgc::ValidationError;

namespace {

ComplexSpectrogram random_spec(std::size_t t, std::size_t f, std::uint64_t seed,
                               double amp = 2.0) {
  hgc::SplitMix64 rng(seed);
  ComplexSpectrogram s(t, f);
  for (auto& z : s.data) z = {rng.uniform(-amp, amp), rng.uniform(-amp, amp)};
  return s;
}

}  // namespace

TEST_CASE("complex masking matches the per-cell reference") {
  const ComplexSpectrogram s = random_spec(6, 33, 1);
  const ComplexSpectrogram m = random_spec(6, 33, 2);
  TanhShape shape;
  shape.pre = 0.7;
  shape.post = 1.3;
  const ComplexSpectrogram out = hgc::mask_apply_e(s, m, shape);
  for (std::size_t i = 0; i < s.data.size(); ++i) {
    CHECK(out.data[i] == hgc::ref::mask_apply_e_cell(s.data[i], m.data[i], shape));
  }
}

TEST_CASE("complex masking bounds magnitude and adds phases") {
  ComplexSpectrogram s(1, 3);
  ComplexSpectrogram m(1, 3);
  s.at(0, 0) = {3.0, 4.0};       // |s| = 5
  m.at(0, 0) = {1e9, 0.0};       // tanh saturates to 1
  s.at(0, 1) = {0.0, 2.0};       // phase pi/2
  m.at(0, 1) = {0.0, 1.0};       // phase pi/2, magnitudes multiply by tanh(1)
  s.at(0, 2) = {5.0, 0.0};
  m.at(0, 2) = {0.0, 0.0};       // zero mask: output magnitude 0

  const ComplexSpectrogram out = hgc::mask_apply_e(s, m, TanhShape{});
  CHECK(std::abs(out.at(0, 0)) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(std::arg(out.at(0, 0)) == doctest::Approx(std::atan2(4.0, 3.0)).epsilon(1e-12));

  CHECK(std::abs(out.at(0, 1)) == doctest::Approx(2.0 * std::tanh(1.0)).epsilon(1e-12));
  // pi/2 + pi/2 = pi
  CHECK(out.at(0, 1).real() == doctest::Approx(-2.0 * std::tanh(1.0)).epsilon(1e-12));

  CHECK(out.at(0, 2) == std::complex<double>(0.0, 0.0));  // tanh(0) == 0 exactly
}

TEST_CASE("the zero cell has phase zero by definition") {
  ComplexSpectrogram s(1, 1);
  ComplexSpectrogram m(1, 1);
  s.at(0, 0) = {0.0, 0.0};
  m.at(0, 0) = {-1.0, 0.0};  // phase pi
  const ComplexSpectrogram out = hgc::mask_apply_e(s, m, TanhShape{});
  // |s| = 0 so the cell is 0 regardless; the reference agrees bit for bit.
  CHECK(out.at(0, 0) == hgc::ref::mask_apply_e_cell(s.at(0, 0), m.at(0, 0), TanhShape{}));
  CHECK(std::abs(out.at(0, 0)) == 0.0);
}

TEST_CASE("tanh shape scales inside and outside") {
  ComplexSpectrogram s(1, 1);
  ComplexSpectrogram m(1, 1);
  s.at(0, 0) = {2.0, 0.0};
  m.at(0, 0) = {0.25, 0.0};
  TanhShape shape;
  shape.pre = 3.0;
  shape.post = 0.5;
  const ComplexSpectrogram out = hgc::mask_apply_e(s, m, shape);
  CHECK(out.at(0, 0).real() ==
        doctest::Approx(2.0 * 0.5 * std::tanh(3.0 * 0.25)).epsilon(1e-12));

  shape.pre = std::nan("");
  CHECK_THROWS_AS(hgc::mask_apply_e(s, m, shape), ValidationError);
}

TEST_CASE("complex masking rejects shape mismatches") {
  const ComplexSpectrogram s = random_spec(2, 8, 3);
  const ComplexSpectrogram m = random_spec(2, 9, 4);
  CHECK_THROWS_AS(hgc::mask_apply_e(s, m, TanhShape{}), ValidationError);
}

TEST_CASE("magnitude mask zero is a bitwise identity") {
  const ComplexSpectrogram s = random_spec(5, 17, 5);
  const MagnitudeMask zero(5, 17);
  const ComplexSpectrogram out = hgc::mask_apply_m(s, zero);
  for (std::size_t i = 0; i < s.data.size(); ++i) CHECK(out.data[i] == s.data[i]);
}

TEST_CASE("magnitude mask one doubles the cell") {
  ComplexSpectrogram s(1, 2);
  s.at(0, 0) = {1.5, -2.5};
  s.at(0, 1) = {-0.25, 0.75};
  MagnitudeMask m(1, 2);
  m.at(0, 0) = 1.0;
  m.at(0, 1) = 0.5;
  const ComplexSpectrogram out = hgc::mask_apply_m(s, m);
  CHECK(out.at(0, 0) == std::complex<double>(3.0, -5.0));
  CHECK(out.at(0, 1) == std::complex<double>(-0.375, 1.125));
}

TEST_CASE("magnitude mask keeps output between |s| and 2|s|") {
  const ComplexSpectrogram s = random_spec(4, 16, 6);
  hgc::SplitMix64 rng(7);
  MagnitudeMask m(4, 16);
  for (double& v : m.data) v = rng.uniform(0.0, 1.0);
  const ComplexSpectrogram out = hgc::mask_apply_m(s, m);
  for (std::size_t i = 0; i < s.data.size(); ++i) {
    const double in_mag = std::abs(s.data[i]);
    const double out_mag = std::abs(out.data[i]);
    CHECK(out_mag >= in_mag * (1.0 - 1e-12));
    CHECK(out_mag <= 2.0 * in_mag * (1.0 + 1e-12));
    // phase untouched: scaling by a positive real
    CHECK(out.data[i] == hgc::ref::mask_apply_m_cell(s.data[i], m.data[i]));
  }
}

TEST_CASE("magnitude mask validates range and shape") {
  const ComplexSpectrogram s = random_spec(2, 4, 8);
  MagnitudeMask m(2, 4);
  m.at(1, 1) = 1.5;
  CHECK_THROWS_WITH_AS(hgc::mask_apply_m(s, m), doctest::Contains("outside"), ValidationError);
  m.at(1, 1) = -0.1;
  CHECK_THROWS_AS(hgc::mask_apply_m(s, m), ValidationError);
  m.at(1, 1) = std::nan("");
  CHECK_THROWS_AS(hgc::mask_apply_m(s, m), ValidationError);

  const MagnitudeMask wrong(2, 5);
  CHECK_THROWS_AS(hgc::mask_apply_m(s, wrong), ValidationError);
}
