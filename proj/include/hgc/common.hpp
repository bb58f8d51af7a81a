#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace hgc {

// Contract violation in inputs or configuration. The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem trouble (missing file, unwritable path). The CLI maps this to exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shared floor applied to magnitudes before any logarithm.
inline constexpr double kLogFloor = 1e-8;

// All bin index arithmetic rounds half away from zero.
inline long round_half_away(double x) { return std::lround(x); }

// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// Row-major raster whose entries are exactly 0 or 1.
struct BinaryRaster {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> data;

  BinaryRaster() = default;
  BinaryRaster(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}

  std::uint8_t& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  std::uint8_t at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// One 0/1 flag per frame.
using FrameFlags = std::vector<std::uint8_t>;

}  // namespace hgc
