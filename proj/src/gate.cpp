#include "hgc/gate.hpp"

#include <fstream>
#include <string>

#include "hgc/common.hpp"

namespace hgc {
namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failure: " + path);
}

}  // namespace

BinaryRaster compose_gate(const FrameFlags& vad, const FrameFlags& vrd,
                          const BinaryRaster& ra, const BinaryRaster& rh) {
  if (ra.rows != rh.rows || ra.cols != rh.cols) {
    throw ValidationError("r_a is " + std::to_string(ra.rows) + "x" + std::to_string(ra.cols) +
                          " but r_h is " + std::to_string(rh.rows) + "x" +
                          std::to_string(rh.cols));
  }
  if (vad.size() != ra.rows) {
    throw ValidationError("vad has " + std::to_string(vad.size()) + " frames, rasters have " +
                          std::to_string(ra.rows));
  }
  if (vrd.size() != ra.rows) {
    throw ValidationError("vrd has " + std::to_string(vrd.size()) + " frames, rasters have " +
                          std::to_string(ra.rows));
  }
  BinaryRaster gate(ra.rows, ra.cols);
#pragma omp parallel for schedule(static)
  for (long long t = 0; t < static_cast<long long>(ra.rows); ++t) {
    const std::size_t row = static_cast<std::size_t>(t);
    const std::uint8_t frame = vad[row] & vrd[row] & 1;
    if (frame == 0) continue;
    for (std::size_t f = 0; f < ra.cols; ++f) {
      gate.at(row, f) = ra.at(row, f) & rh.at(row, f);
    }
  }
  return gate;
}

void save_raster_csv(const std::string& path, const BinaryRaster& raster) {
  std::string text;
  text.reserve(raster.rows * (raster.cols * 2 + 1));
  for (std::size_t t = 0; t < raster.rows; ++t) {
    for (std::size_t f = 0; f < raster.cols; ++f) {
      if (f) text.push_back(',');
      text.push_back(raster.at(t, f) ? '1' : '0');
    }
    text.push_back('\n');
  }
  write_text(path, text);
}

void save_raster_pgm(const std::string& path, const BinaryRaster& raster) {
  std::string text = "P5\n" + std::to_string(raster.cols) + " " +
                     std::to_string(raster.rows) + "\n255\n";
  text.reserve(text.size() + raster.data.size());
  for (std::uint8_t v : raster.data) text.push_back(v ? static_cast<char>(255) : '\0');
  write_text(path, text);
}

void save_flags_csv(const std::string& path, const FrameFlags& flags,
                    const std::string& name) {
  std::string text = "frame," + name + "\n";
  for (std::size_t t = 0; t < flags.size(); ++t) {
    text += std::to_string(t);
    text.push_back(',');
    text.push_back(flags[t] ? '1' : '0');
    text.push_back('\n');
  }
  write_text(path, text);
}

}  // namespace hgc
