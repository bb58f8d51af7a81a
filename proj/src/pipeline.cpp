#include "hgc/pipeline.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "hgc/audio_io.hpp"
#include "hgc/common.hpp"
#include "hgc/gate.hpp"
#include "hgc/masking.hpp"
#include "hgc/metrics.hpp"

namespace fs = std::filesystem;

namespace hgc {
namespace {

std::string trim(const std::string& s) {
  const std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception&) {
    throw ValidationError("bad value '" + value + "' for config key '" + key + "'");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    if (v < INT32_MIN || v > INT32_MAX) throw std::out_of_range("int range");
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw ValidationError("bad value '" + value + "' for config key '" + key + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ValidationError("bad value '" + value + "' for config key '" + key + "'");
}

VadOverride parse_override(const std::string& key, const std::string& value) {
  if (value == "auto") return VadOverride::kAuto;
  if (value == "on") return VadOverride::kForceOn;
  if (value == "off") return VadOverride::kForceOff;
  throw ValidationError("bad value '" + value + "' for config key '" + key + "'");
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failure: " + path);
}

struct AnalysisProducts {
  Matrix significance;
  PitchTrack track;
  BinaryRaster rh;
  BinaryRaster ra;
  BinaryRaster rb;
  FrameFlags vad;
  FrameFlags vrd;
  BinaryRaster gate;
};

// Shared trunk of analyze and the oracle: pitch, labels, activity flags and
// the composed gate, all derived from one magnitude spectrogram.
AnalysisProducts analyze_magnitude(const Matrix& mag, int sample_rate,
                                   const EnergyStats& stats, const PipelineConfig& cfg) {
  if (stats.mu.size() != mag.cols) {
    throw ValidationError("stats file has " + std::to_string(stats.mu.size()) +
                          " bins, spectrogram has " + std::to_string(mag.cols));
  }
  // Candidate analysis runs on the half-rate band the bins actually span.
  const int analysis_rate = sample_rate / 2;

  AnalysisProducts out;
  const IntegralMatrix u = build_integral_matrix(analysis_rate, mag.cols, cfg.matrix_options());
  const SparseIntegralMatrix sparse = to_sparse(u);
  out.significance = significance_spectrum(mag, sparse, cfg.log_floor);
  out.track = pick_pitch(out.significance, cfg.matrix_options());
  out.rh = harmonic_raster(out.track, analysis_rate, mag.cols);
  out.ra = energy_labels(mag, make_thresholds(stats, cfg.epsilon_a), cfg.log_floor);
  out.rb = energy_labels(mag, make_thresholds(stats, cfg.epsilon_b), cfg.log_floor);
  switch (cfg.vad_override) {
    case VadOverride::kAuto:
      out.vad = vad_track(out.rb, cfg.vad_count);
      break;
    case VadOverride::kForceOff:
      out.vad.assign(mag.rows, 0);
      break;
    case VadOverride::kForceOn:
      out.vad.assign(mag.rows, 1);
      break;
  }
  out.vrd = vrd_track(out.rb);
  out.gate = compose_gate(out.vad, out.vrd, out.ra, out.rh);
  return out;
}

}  // namespace

void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "fft_size") {
    cfg.stft.fft_size = parse_int(key, value);
  } else if (key == "win_length") {
    cfg.stft.win_length = parse_int(key, value);
  } else if (key == "hop") {
    cfg.stft.hop = parse_int(key, value);
  } else if (key == "pitch_min_hz") {
    cfg.pitch_min_hz = parse_double(key, value);
  } else if (key == "pitch_max_hz") {
    cfg.pitch_max_hz = parse_double(key, value);
  } else if (key == "pitch_resolution_hz") {
    cfg.pitch_resolution_hz = parse_double(key, value);
  } else if (key == "split_valley_on_even_gap") {
    cfg.split_valley_on_even_gap = parse_bool(key, value);
  } else if (key == "epsilon_a") {
    cfg.epsilon_a = parse_double(key, value);
  } else if (key == "epsilon_b") {
    cfg.epsilon_b = parse_double(key, value);
  } else if (key == "vad_count") {
    cfg.vad_count = parse_int(key, value);
  } else if (key == "log_floor") {
    cfg.log_floor = parse_double(key, value);
  } else if (key == "vad_override") {
    cfg.vad_override = parse_override(key, value);
  } else {
    throw ValidationError("unknown config key '" + key + "'");
  }
}

PipelineConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  PipelineConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("malformed config line " + std::to_string(lineno) + ": " + stripped);
    }
    apply_config_entry(cfg, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
  return cfg;
}

std::string serialize_config(const PipelineConfig& cfg) {
  char buf[64];
  std::string out;
  const auto add_int = [&out](const char* k, long v) {
    out += k;
    out += '=';
    out += std::to_string(v);
    out += '\n';
  };
  const auto add_double = [&out, &buf](const char* k, double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += k;
    out += '=';
    out += buf;
    out += '\n';
  };
  add_int("fft_size", cfg.stft.fft_size);
  add_int("win_length", cfg.stft.win_length);
  add_int("hop", cfg.stft.hop);
  add_double("pitch_min_hz", cfg.pitch_min_hz);
  add_double("pitch_max_hz", cfg.pitch_max_hz);
  add_double("pitch_resolution_hz", cfg.pitch_resolution_hz);
  out += std::string("split_valley_on_even_gap=") +
         (cfg.split_valley_on_even_gap ? "true" : "false") + "\n";
  add_double("epsilon_a", cfg.epsilon_a);
  add_double("epsilon_b", cfg.epsilon_b);
  add_int("vad_count", cfg.vad_count);
  add_double("log_floor", cfg.log_floor);
  out += "vad_override=";
  switch (cfg.vad_override) {
    case VadOverride::kAuto:
      out += "auto";
      break;
    case VadOverride::kForceOff:
      out += "off";
      break;
    case VadOverride::kForceOn:
      out += "on";
      break;
  }
  out += '\n';
  return out;
}

StatsResult run_stats(const std::string& dir, const std::string& out_file,
                      const PipelineConfig& cfg) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir);

  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") {
      paths.push_back(entry.path().string());
    }
  }
  if (ec) throw IoError("cannot scan directory: " + dir);
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw ValidationError("no .wav files in " + dir);

  StatsResult result;
  std::vector<Matrix> mags;
  for (const std::string& p : paths) {
    try {
      const AudioClip clip = read_wav(p);
      mags.push_back(magnitude(stft_forward(clip.samples, cfg.stft)));
      result.used.push_back(p);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "warning: skipping %s: %s\n", p.c_str(), e.what());
      result.skipped.push_back(p);
    }
  }
  if (mags.empty()) throw ValidationError("no usable .wav files in " + dir);

  result.stats = corpus_stats(mags, cfg.log_floor);
  save_stats_csv(out_file, result.stats);
  return result;
}

void run_analyze(const std::string& wav_path, const std::string& stats_path,
                 const std::string& outdir, const PipelineConfig& cfg) {
  const AudioClip clip = read_wav(wav_path);
  const Matrix mag = magnitude(stft_forward(clip.samples, cfg.stft));
  const EnergyStats stats = load_stats_csv(stats_path);
  const AnalysisProducts products = analyze_magnitude(mag, clip.sample_rate, stats, cfg);

  std::error_code ec;
  fs::create_directories(outdir, ec);
  if (ec) throw IoError("cannot create output directory: " + outdir);
  const fs::path base(outdir);
  save_pitch_csv((base / "pitch.csv").string(), products.track, products.significance);
  save_raster_pgm((base / "rh.pgm").string(), products.rh);
  save_raster_pgm((base / "ra.pgm").string(), products.ra);
  save_raster_pgm((base / "rb.pgm").string(), products.rb);
  save_flags_csv((base / "vad.csv").string(), products.vad, "vad");
  save_flags_csv((base / "vrd.csv").string(), products.vrd, "vrd");
  save_raster_pgm((base / "gate.pgm").string(), products.gate);
}

std::string OracleReport::text() const {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "frames=%zu\nbins=%zu\ngate_open_cells=%zu\n"
                "si_sdr_before_db=%.6f\nsi_sdr_after_db=%.6f\nsi_sdr_delta_db=%.6f\n",
                frames, bins, gate_open_cells, si_sdr_before_db, si_sdr_after_db,
                si_sdr_delta_db);
  return buf;
}

OracleReport run_oracle_gate(const std::string& noisy_path, const std::string& clean_path,
                             const std::string& stats_path, const std::string& out_wav,
                             const std::string& report_path, const PipelineConfig& cfg) {
  const AudioClip noisy = read_wav(noisy_path);
  const AudioClip clean = read_wav(clean_path);
  if (noisy.samples.size() != clean.samples.size()) {
    throw ValidationError("noisy has " + std::to_string(noisy.samples.size()) +
                          " samples, clean has " + std::to_string(clean.samples.size()));
  }

  const ComplexSpectrogram sn = stft_forward(noisy.samples, cfg.stft);
  const Matrix mag_n = magnitude(sn);
  const Matrix mag_c = magnitude(stft_forward(clean.samples, cfg.stft));
  const EnergyStats stats = load_stats_csv(stats_path);

  // The gate comes from the clean reference; that is the whole point of the
  // oracle: measure what the gating geometry allows, not what an estimator
  // found.
  const AnalysisProducts products = analyze_magnitude(mag_c, clean.sample_rate, stats, cfg);

  MagnitudeMask mask(mag_n.rows, mag_n.cols);
  std::size_t open = 0;
  for (std::size_t t = 0; t < mag_n.rows; ++t) {
    for (std::size_t f = 0; f < mag_n.cols; ++f) {
      if (!products.gate.at(t, f)) continue;
      ++open;
      const double mn = mag_n.at(t, f);
      const double mc = mag_c.at(t, f);
      if (mn > 0.0) {
        mask.at(t, f) = std::clamp(mc / mn - 1.0, 0.0, 1.0);
      } else {
        mask.at(t, f) = mc > 0.0 ? 1.0 : 0.0;
      }
    }
  }

  const std::vector<double> enhanced = istft_inverse(mask_apply_m(sn, mask));
  const std::size_t span = enhanced.size();
  const std::vector<double> ref(clean.samples.begin(),
                                clean.samples.begin() + static_cast<std::ptrdiff_t>(span));
  const std::vector<double> before(noisy.samples.begin(),
                                   noisy.samples.begin() + static_cast<std::ptrdiff_t>(span));

  OracleReport report;
  report.frames = products.gate.rows;
  report.bins = products.gate.cols;
  report.gate_open_cells = open;
  report.si_sdr_before_db = si_sdr(before, ref);
  report.si_sdr_after_db = si_sdr(enhanced, ref);
  report.si_sdr_delta_db = report.si_sdr_after_db - report.si_sdr_before_db;

  AudioClip out_clip;
  out_clip.samples = enhanced;
  out_clip.sample_rate = noisy.sample_rate;
  write_wav(out_wav, out_clip);
  write_text_file(report_path, report.text());
  return report;
}

}  // namespace hgc
