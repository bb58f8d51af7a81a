#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hgc/common.hpp"

namespace hgc {

struct IntegralMatrixOptions {
  double min_hz = 60.0;        // lowest candidate with content
  double max_hz = 420.0;       // exclusive upper bound
  double resolution_hz = 0.1;  // candidate grid step
  // Swaps the parity rule: valleys split across two bins on even gaps and
  // land on a single bin on odd gaps. Default follows the printed rule
  // (split on odd gaps).
  bool split_valley_on_even_gap = false;
};

// Maps a log-magnitude frame to the significance of every pitch candidate in
// one product. Row f covers candidate f*resolution Hz: each harmonic k up to
// round(sr/(f*resolution)) adds +1/sqrt(k) at its peak bin and -1/sqrt(k)
// spread over valley bins between consecutive peaks, so every nonzero row
// sums to zero. sr is half the audio sample rate for one-sided spectra.
struct IntegralMatrix {
  Matrix values;  // candidates x bins
  int sample_rate = 0;
  IntegralMatrixOptions options;

  std::size_t candidate_begin() const {
    return static_cast<std::size_t>(round_half_away(options.min_hz / options.resolution_hz));
  }
  std::size_t candidate_count() const { return values.rows; }
};

IntegralMatrix build_integral_matrix(int sample_rate, std::size_t bins,
                                     const IntegralMatrixOptions& opt = {});

// Compressed sparse rows over the nonzero entries, columns ascending within
// each row. Row walks therefore accumulate in a fixed order.
struct SparseIntegralMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  int sample_rate = 0;
  IntegralMatrixOptions options;
  std::vector<std::size_t> row_start;  // rows + 1 entries
  std::vector<int> col;
  std::vector<double> value;
};

SparseIntegralMatrix to_sparse(const IntegralMatrix& matrix);

// Q = log(max(mag, floor)) * U^T, frames x candidates. Non-finite magnitudes
// are a ValidationError. Candidate columns below min_hz stay zero.
Matrix significance_spectrum(const Matrix& mag, const SparseIntegralMatrix& matrix,
                             double log_floor = kLogFloor);
Matrix significance_spectrum(const Matrix& mag, const IntegralMatrix& matrix,
                             double log_floor = kLogFloor);

struct PitchTrack {
  std::vector<double> pitch_hz;     // 0 marks an unvoiced frame
  std::vector<int> candidate_index;
};

// Per-frame argmax over the candidate range, ties toward the lowest index.
// Every frame receives a pitch; silence suppression is the gate's job.
PitchTrack pick_pitch(const Matrix& significance, const IntegralMatrixOptions& opt = {});

// Bins round(p*k*F/sr) for k = 1..floor(sr/p); indices beyond the last bin
// are dropped. Zero-pitch frames yield all-zero rows.
BinaryRaster harmonic_raster(const PitchTrack& track, int sample_rate, std::size_t bins);

// Binary container: magic "HGCU", version byte 1, u32 rows/cols/sample_rate,
// then row-major little-endian f32 values.
void save_integral_matrix(const std::string& path, const IntegralMatrix& matrix);
IntegralMatrix load_integral_matrix(const std::string& path);

// CSV "frame,pitch_hz,significance"; significance is read at the chosen
// candidate column.
void save_pitch_csv(const std::string& path, const PitchTrack& track,
                    const Matrix& significance);

}  // namespace hgc
