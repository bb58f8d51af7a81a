#pragma once

#include <string>

#include "hgc/common.hpp"

namespace hgc {

// Elementwise product vad[t] * vrd[t] * ra[t,f] * rh[t,f]. Dimension
// mismatches raise a ValidationError naming the offending input.
BinaryRaster compose_gate(const FrameFlags& vad, const FrameFlags& vrd,
                          const BinaryRaster& ra, const BinaryRaster& rh);

// T lines of F comma-separated 0/1 values.
void save_raster_csv(const std::string& path, const BinaryRaster& raster);

// Binary PGM (P5), width = bins, height = frames, open cells are 255.
void save_raster_pgm(const std::string& path, const BinaryRaster& raster);

// CSV "frame,<name>" with one 0/1 row per frame.
void save_flags_csv(const std::string& path, const FrameFlags& flags,
                    const std::string& name);

}  // namespace hgc
