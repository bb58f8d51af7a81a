#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hgc/harmonic.hpp"
#include "hgc/sed.hpp"
#include "hgc/stft.hpp"

namespace hgc {

enum class VadOverride { kAuto, kForceOff, kForceOn };

struct PipelineConfig {
  StftConfig stft;
  double pitch_min_hz = 60.0;
  double pitch_max_hz = 420.0;  // exclusive
  double pitch_resolution_hz = 0.1;
  bool split_valley_on_even_gap = false;
  double epsilon_a = 0.0;
  double epsilon_b = 4.0 / 3.0;
  int vad_count = 24;
  double log_floor = kLogFloor;
  VadOverride vad_override = VadOverride::kAuto;

  IntegralMatrixOptions matrix_options() const {
    return {pitch_min_hz, pitch_max_hz, pitch_resolution_hz, split_valley_on_even_gap};
  }
};

// key=value lines; blank lines and lines starting with # are skipped.
// Unknown keys and unparsable values are ValidationErrors.
PipelineConfig load_config_file(const std::string& path);
void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value);
std::string serialize_config(const PipelineConfig& cfg);

struct StatsResult {
  EnergyStats stats;
  std::vector<std::string> used;     // files that contributed
  std::vector<std::string> skipped;  // unreadable files, warned to stderr
};

// Scans dir for *.wav (sorted by name), writes the stats CSV. Unreadable
// files are skipped with a warning; no usable file is a ValidationError.
StatsResult run_stats(const std::string& dir, const std::string& out_file,
                      const PipelineConfig& cfg);

// Writes pitch.csv, rh.pgm, ra.pgm, rb.pgm, vad.csv, vrd.csv and gate.pgm
// into outdir. Byte-deterministic for identical inputs and config.
void run_analyze(const std::string& wav_path, const std::string& stats_path,
                 const std::string& outdir, const PipelineConfig& cfg);

struct OracleReport {
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::size_t gate_open_cells = 0;
  double si_sdr_before_db = 0.0;
  double si_sdr_after_db = 0.0;
  double si_sdr_delta_db = 0.0;

  std::string text() const;
};

// Gate from the clean reference, compensation mask = clamp(|Sc|/|Sn| - 1, 0, 1)
// on open cells (1 where |Sn| is zero but |Sc| is not), zero elsewhere;
// applies the magnitude mask to the noisy spectrogram, inverts, writes the
// enhanced WAV plus a report with SI-SDR before/after over the reconstructed
// span.
OracleReport run_oracle_gate(const std::string& noisy_path, const std::string& clean_path,
                             const std::string& stats_path, const std::string& out_wav,
                             const std::string& report_path, const PipelineConfig& cfg);

}  // namespace hgc
