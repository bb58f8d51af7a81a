#pragma once

#include <vector>

namespace hgc {

// Scale-invariant signal-to-distortion ratio in dB, clamped to [-100, 100].
// Both signals are mean-removed; the target is the projection of the
// estimate onto the reference. A zero distortion term returns +100, then a
// zero target term returns -100. Length mismatches and a zero-energy
// reference (after mean removal) are ValidationErrors.
double si_sdr(const std::vector<double>& estimate, const std::vector<double>& reference);

}  // namespace hgc
