// Acceptance gate: ten numbered end-to-end criteria, each printing one
// [PASS]/[FAIL] line with its measured values. Run without arguments for
// all ten, or pass criterion numbers. Exit code is the failure count.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "hgc/audio_io.hpp"
#include "hgc/common.hpp"
#include "hgc/compensator.hpp"
#include "hgc/gate.hpp"
#include "hgc/harmonic.hpp"
#include "hgc/masking.hpp"
#include "hgc/metrics.hpp"
#include "hgc/pipeline.hpp"
#include "hgc/ref.hpp"
#include "hgc/rng.hpp"
#include "hgc/sed.hpp"
#include "hgc/stft.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string details;
};

std::string strprintf(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(HGC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

std::string scratch(const std::string& name) {
  const fs::path p = fs::path("acceptance_tmp") / name;
  fs::create_directories(p);
  return p.string();
}

// --- 1: integral matrix fidelity -----------------------------------------

// Independent re-execution of the row construction for one candidate,
// written from the algorithm text with its own rounding spelling.
std::vector<double> row_oracle_100hz(std::size_t bins) {
  std::vector<double> row(bins, 0.0);
  const double sr = 8000.0;
  const double f_hz = 100.0;
  const long harmonics = static_cast<long>(std::floor(sr / f_hz + 0.5));
  long last = 0;
  for (long k = 1; k <= harmonics; ++k) {
    const double position = f_hz * static_cast<double>(k) * static_cast<double>(bins) / sr;
    const long idx = static_cast<long>(std::floor(position + 0.5));
    if (idx >= static_cast<long>(bins)) break;
    const double w = 1.0 / std::sqrt(static_cast<double>(k));
    row[static_cast<std::size_t>(idx)] += w;
    const long gap = idx - last;
    if (gap > 1) {
      const long mid = last + static_cast<long>(std::floor(static_cast<double>(gap) / 2.0 + 0.5));
      if (gap % 2 != 0) {
        row[static_cast<std::size_t>(mid)] -= 0.5 * w;
        row[static_cast<std::size_t>(mid + 1)] -= 0.5 * w;
      } else {
        row[static_cast<std::size_t>(mid)] -= w;
      }
    } else {
      row[static_cast<std::size_t>(idx)] -= 0.5 * w;
      row[static_cast<std::size_t>(last)] -= 0.5 * w;
    }
    last = idx;
  }
  return row;
}

Outcome criterion_matrix() {
  const hgc::IntegralMatrix u = hgc::build_integral_matrix(8000, 257);
  if (u.values.rows != 4200 || u.values.cols != 257) {
    return {false, strprintf("shape %zux%zu, expected 4200x257", u.values.rows, u.values.cols)};
  }

  double worst_sum = 0.0;
  for (std::size_t r = 0; r < u.values.rows; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < u.values.cols; ++c) sum += u.values.at(r, c);
    worst_sum = std::max(worst_sum, std::abs(sum));
  }
  if (worst_sum > 1e-6) return {false, strprintf("row sum %.3g exceeds 1e-6", worst_sum)};

  for (std::size_t r = 0; r < 600; ++r) {
    for (std::size_t c = 0; c < u.values.cols; ++c) {
      if (u.values.at(r, c) != 0.0) {
        return {false, strprintf("row %zu below the candidate floor is nonzero", r)};
      }
    }
  }

  const std::vector<double> oracle = row_oracle_100hz(257);
  for (std::size_t c = 0; c < 257; ++c) {
    if (u.values.at(1000, c) != oracle[c]) {
      return {false, strprintf("row 1000 col %zu: %.17g vs oracle %.17g", c,
                               u.values.at(1000, c), oracle[c])};
    }
  }
  // hand-frozen spot values for the same row
  const double s2 = 1.0 / std::sqrt(2.0);
  const double s3 = 1.0 / std::sqrt(3.0);
  const bool spots = u.values.at(1000, 2) == -0.5 && u.values.at(1000, 3) == 0.5 &&
                     u.values.at(1000, 5) == -0.5 * s2 && u.values.at(1000, 6) == 0.5 * s2 &&
                     u.values.at(1000, 8) == -s3 && u.values.at(1000, 10) == s3 &&
                     u.values.at(1000, 12) == -0.25 && u.values.at(1000, 13) == 0.25 &&
                     u.values.at(1000, 255) == 0.0 && u.values.at(1000, 256) == 0.0;
  if (!spots) return {false, "row 1000 hand-computed spot values disagree"};

  return {true, strprintf("4200 rows, max |row sum| %.2e, row 1000 exact", worst_sum)};
}

// --- 2: pitch accuracy sweep ----------------------------------------------

Outcome criterion_sweep() {
  const hgc::IntegralMatrix u = hgc::build_integral_matrix(8000, 257);
  const hgc::SparseIntegralMatrix sparse = hgc::to_sparse(u);
  const hgc::StftConfig stft_cfg;
  const double noise_std = std::sqrt(0.4);  // 8 unit cosines carry power 4.0: 10 dB SNR

  std::size_t hits = 0;
  std::size_t octave_ok = 0;
  std::size_t total = 0;
  for (int f0 = 60; f0 <= 419; ++f0) {
    hgc::SplitMix64 rng(1000 + static_cast<std::uint64_t>(f0));
    double phase[8];
    for (double& p : phase) p = rng.uniform(0.0, 2.0 * std::numbers::pi_v<double>);
    std::vector<double> x(8000, 0.0);
    for (int k = 1; k <= 8; ++k) {
      const double step =
          2.0 * std::numbers::pi_v<double> * f0 * static_cast<double>(k) / 16000.0;
      for (std::size_t n = 0; n < x.size(); ++n) {
        x[n] += std::cos(step * static_cast<double>(n) + phase[k - 1]);
      }
    }
    for (double& v : x) v += noise_std * rng.gauss();

    const hgc::Matrix mag = hgc::magnitude(hgc::stft_forward(x, stft_cfg));
    const hgc::Matrix q = hgc::significance_spectrum(mag, sparse);
    const hgc::PitchTrack track = hgc::pick_pitch(q);
    for (const double p : track.pitch_hz) {
      ++total;
      if (std::abs(p - static_cast<double>(f0)) <= 0.5) ++hits;
      const double ratio = p / static_cast<double>(f0);
      if (ratio >= 0.9 && ratio <= 1.1) ++octave_ok;
    }
  }

  const double pct_half = 100.0 * static_cast<double>(hits) / static_cast<double>(total);
  const double pct_oct = 100.0 * static_cast<double>(octave_ok) / static_cast<double>(total);
  return {pct_half >= 95.0 && pct_oct >= 99.0,
          strprintf("%zu frames over 360 combs: %.2f%% within 0.5 Hz (need 95), "
                    "%.2f%% ratio in [0.9, 1.1] (need 99)",
                    total, pct_half, pct_oct)};
}

// --- 3: pitch scale invariance ---------------------------------------------

Outcome criterion_scale() {
  const hgc::IntegralMatrix u = hgc::build_integral_matrix(8000, 257);
  const hgc::SparseIntegralMatrix sparse = hgc::to_sparse(u);
  for (int trial = 0; trial < 20; ++trial) {
    hgc::SplitMix64 rng(500 + static_cast<std::uint64_t>(trial));
    hgc::Matrix mag(10, 257);
    for (double& v : mag.data) v = rng.uniform(1e-3, 1.0);
    const hgc::PitchTrack base = hgc::pick_pitch(hgc::significance_spectrum(mag, sparse));
    for (const double scale : {1e-3, 1e3}) {
      hgc::Matrix scaled = mag;
      for (double& v : scaled.data) v *= scale;
      const hgc::PitchTrack got = hgc::pick_pitch(hgc::significance_spectrum(scaled, sparse));
      if (got.candidate_index != base.candidate_index || got.pitch_hz != base.pitch_hz) {
        return {false, strprintf("trial %d diverges at scale %g", trial, scale)};
      }
    }
  }
  return {true, "20 spectrograms x scales {1e-3, 1, 1e3}: picks bit-identical"};
}

// --- 4: stft round trip -----------------------------------------------------

Outcome criterion_roundtrip() {
  const hgc::StftConfig cfg;
  double worst = 1e300;
  for (int i = 0; i < 50; ++i) {
    hgc::SplitMix64 rng(100 + static_cast<std::uint64_t>(i));
    std::vector<double> x(16000);
    for (double& v : x) v = rng.uniform(-0.5, 0.5);
    const std::vector<double> y = hgc::istft_inverse(hgc::stft_forward(x, cfg));
    double num = 0.0;
    double den = 0.0;
    for (std::size_t s = 512; s + 512 < x.size(); ++s) {
      num += x[s] * x[s];
      const double d = x[s] - y[s];
      den += d * d;
    }
    const double snr = 10.0 * std::log10(num / den);
    worst = std::min(worst, snr);
  }
  return {worst >= 60.0, strprintf("50 clips, worst interior SNR %.1f dB (need 60)", worst)};
}

// --- 5: gate algebra ---------------------------------------------------------

Outcome criterion_gate() {
  for (int i = 0; i < 16; ++i) {
    const int vad = (i >> 3) & 1;
    const int vrd = (i >> 2) & 1;
    const int ra = (i >> 1) & 1;
    const int rh = i & 1;
    hgc::FrameFlags vadf{static_cast<std::uint8_t>(vad)};
    hgc::FrameFlags vrdf{static_cast<std::uint8_t>(vrd)};
    hgc::BinaryRaster raf(1, 1);
    hgc::BinaryRaster rhf(1, 1);
    raf.at(0, 0) = static_cast<std::uint8_t>(ra);
    rhf.at(0, 0) = static_cast<std::uint8_t>(rh);
    const int got = hgc::compose_gate(vadf, vrdf, raf, rhf).at(0, 0);
    const int want = hgc::ref::gate_cell(vad, vrd, ra, rh);
    if (got != want || got != (i == 15 ? 1 : 0)) {
      return {false, strprintf("truth table case %d: got %d want %d", i, got, want)};
    }
  }

  const std::size_t T = 1000;
  const std::size_t F = 1000;
  hgc::SplitMix64 rng(55);
  hgc::FrameFlags vad(T);
  hgc::FrameFlags vrd(T);
  hgc::BinaryRaster ra(T, F);
  hgc::BinaryRaster rh(T, F);
  for (auto& v : vad) v = static_cast<std::uint8_t>(rng.next() & 1);
  for (auto& v : vrd) v = static_cast<std::uint8_t>(rng.next() & 1);
  for (auto& v : ra.data) v = static_cast<std::uint8_t>(rng.next() & 1);
  for (auto& v : rh.data) v = static_cast<std::uint8_t>(rng.next() & 1);
  const hgc::BinaryRaster gate = hgc::compose_gate(vad, vrd, ra, rh);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t f = 0; f < F; ++f) {
      const int g = gate.at(t, f);
      if (g > ra.at(t, f) || g > rh.at(t, f) || g > vad[t] || g > vrd[t] ||
          g != hgc::ref::gate_cell(vad[t], vrd[t], ra.at(t, f), rh.at(t, f))) {
        return {false, strprintf("random cell (%zu, %zu) breaks the factor bound", t, f)};
      }
    }
  }
  return {true, "16/16 truth table cases, 1000000 random cells bounded by every factor"};
}

// --- 6: energy label thresholds ---------------------------------------------

Outcome criterion_thresholds() {
  hgc::SplitMix64 rng(66);
  std::vector<hgc::Matrix> clips;
  clips.reserve(100);
  for (int i = 0; i < 100; ++i) {
    hgc::Matrix m(20 + (rng.next() % 21), 257);
    for (double& v : m.data) v = rng.uniform(0.0, 2.0);
    clips.push_back(std::move(m));
  }
  const hgc::EnergyStats stats = hgc::corpus_stats(clips);
  const hgc::Thresholds thr_a = hgc::make_thresholds(stats, 0.0);
  const hgc::Thresholds thr_b = hgc::make_thresholds(stats, 4.0 / 3.0);

  std::size_t cells = 0;
  for (const hgc::Matrix& clip : clips) {
    const hgc::BinaryRaster ra = hgc::energy_labels(clip, thr_a);
    const hgc::BinaryRaster rb = hgc::energy_labels(clip, thr_b);
    for (std::size_t i = 0; i < ra.data.size(); ++i) {
      ++cells;
      if (rb.data[i] && !ra.data[i]) {
        return {false, strprintf("tight label outside the loose set after %zu cells", cells)};
      }
    }
  }

  hgc::BinaryRaster boundary(2, 257);
  for (std::size_t f = 0; f < 24; ++f) boundary.at(0, f) = 1;
  for (std::size_t f = 0; f < 25; ++f) boundary.at(1, f) = 1;
  const hgc::FrameFlags vad = hgc::vad_track(boundary, 24);
  if (vad[0] != 0 || vad[1] != 1) {
    return {false, strprintf("count boundary: 24 bins -> %d, 25 bins -> %d", int(vad[0]),
                             int(vad[1]))};
  }
  return {true, strprintf("containment on %zu cells over 100 clips; 24 bins -> 0, 25 -> 1",
                          cells)};
}

// --- 7: mask apply oracles ----------------------------------------------------

Outcome criterion_masks() {
  const std::size_t T = 100;
  const std::size_t F = 1000;
  hgc::SplitMix64 rng(77);
  hgc::ComplexSpectrogram s(T, F);
  hgc::ComplexSpectrogram m(T, F);
  hgc::MagnitudeMask mm(T, F);
  for (auto& v : s.data) v = {rng.gauss(), rng.gauss()};
  for (auto& v : m.data) v = {rng.gauss(), rng.gauss()};
  for (auto& v : mm.data) v = rng.uniform(0.0, 1.0);

  const hgc::TanhShape shape;
  const hgc::ComplexSpectrogram out_e = hgc::mask_apply_e(s, m, shape);
  const hgc::ComplexSpectrogram out_m = hgc::mask_apply_m(s, mm);
  double worst_e = 0.0;
  double worst_m = 0.0;
  for (std::size_t i = 0; i < s.data.size(); ++i) {
    worst_e = std::max(worst_e,
                       std::abs(out_e.data[i] - hgc::ref::mask_apply_e_cell(s.data[i],
                                                                            m.data[i], shape)));
    worst_m = std::max(worst_m,
                       std::abs(out_m.data[i] - hgc::ref::mask_apply_m_cell(s.data[i],
                                                                            mm.data[i])));
  }
  if (worst_e > 1e-9 || worst_m > 1e-9) {
    return {false, strprintf("scalar oracle deviation: tanh %.3g, additive %.3g", worst_e,
                             worst_m)};
  }

  const hgc::MagnitudeMask zero(T, F);
  const hgc::ComplexSpectrogram ident = hgc::mask_apply_m(s, zero);
  if (ident.data != s.data) return {false, "zero mask is not a bitwise identity"};

  return {true, strprintf("100000 cells: max deviation tanh %.2e, additive %.2e; "
                          "zero mask bitwise identity",
                          worst_e, worst_m)};
}

// --- 8: compensator causality ---------------------------------------------------

Outcome criterion_causality() {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const hgc::GhcmState net = hgc::make_default_ghcm(seed);
    hgc::SplitMix64 rng(900 + seed);
    hgc::Matrix mag(12, 33);
    for (double& v : mag.data) v = rng.uniform(0.0, 2.0);
    hgc::BinaryRaster gate(12, 33);
    for (auto& v : gate.data) v = static_cast<std::uint8_t>(rng.next() & 1);
    const hgc::MagnitudeMask base = hgc::ghcm_forward(mag, gate, net);

    const std::size_t tp = 3 + static_cast<std::size_t>(seed % 6);
    hgc::Matrix mag2 = mag;
    hgc::BinaryRaster gate2 = gate;
    for (std::size_t f = 0; f < mag.cols; ++f) {
      mag2.at(tp, f) += 0.37;
      gate2.at(tp, f) ^= 1;
    }
    const hgc::MagnitudeMask out2 = hgc::ghcm_forward(mag2, gate2, net);

    double max_pre = 0.0;
    bool later_changed = false;
    for (std::size_t t = 0; t < base.frames; ++t) {
      for (std::size_t f = 0; f < base.bins; ++f) {
        const double d = std::abs(out2.at(t, f) - base.at(t, f));
        if (t < tp) {
          max_pre = std::max(max_pre, d);
        } else if (d != 0.0) {
          later_changed = true;
        }
      }
    }
    if (max_pre != 0.0) {
      return {false, strprintf("seed %llu leaks %.3g before the perturbed frame",
                               static_cast<unsigned long long>(seed), max_pre)};
    }
    if (!later_changed) {
      return {false, strprintf("seed %llu: perturbation had no effect at all",
                               static_cast<unsigned long long>(seed))};
    }
  }
  return {true, "10 weight seeds: max |delta| before the perturbed frame is exactly 0"};
}

// --- 9: oracle gate enhancement ----------------------------------------------

Outcome criterion_oracle() {
  const std::string root = scratch("c9");
  const std::string corpus = scratch("c9/corpus");
  const hgc::PipelineConfig cfg;

  std::vector<std::vector<double>> cleans(20);
  std::vector<std::string> clean_paths(20);
  for (int i = 0; i < 20; ++i) {
    cleans[i] = testutil::oracle_clean_clip(7000 + static_cast<std::uint64_t>(i));
    clean_paths[i] = strprintf("%s/c%02d.wav", corpus.c_str(), i);
    hgc::AudioClip clip;
    clip.samples = cleans[i];
    hgc::write_wav(clean_paths[i], clip);
  }
  const std::string stats = root + "/stats.csv";
  hgc::run_stats(corpus, stats, cfg);

  double sum = 0.0;
  double min_delta = 1e300;
  double max_delta = -1e300;
  double open_cells = 0.0;
  double total_cells = 0.0;
  std::string first_report;
  for (int i = 0; i < 20; ++i) {
    const std::vector<double> noise = testutil::gauss_noise(
        8000 + static_cast<std::uint64_t>(i), testutil::rms(cleans[i]), cleans[i].size());
    hgc::AudioClip noisy;
    noisy.samples = cleans[i];
    for (std::size_t n = 0; n < noise.size(); ++n) noisy.samples[n] += noise[n];
    const std::string noisy_path = strprintf("%s/n%02d.wav", root.c_str(), i);
    hgc::write_wav(noisy_path, noisy);

    const hgc::OracleReport rep = hgc::run_oracle_gate(
        noisy_path, clean_paths[i], stats, strprintf("%s/e%02d.wav", root.c_str(), i),
        strprintf("%s/r%02d.txt", root.c_str(), i), cfg);
    sum += rep.si_sdr_delta_db;
    min_delta = std::min(min_delta, rep.si_sdr_delta_db);
    max_delta = std::max(max_delta, rep.si_sdr_delta_db);
    open_cells += static_cast<double>(rep.gate_open_cells);
    total_cells += static_cast<double>(rep.frames * rep.bins);
    if (i == 0) first_report = rep.text();
  }

  const hgc::OracleReport again = hgc::run_oracle_gate(
      root + "/n00.wav", clean_paths[0], stats, root + "/e00_rerun.wav",
      root + "/r00_rerun.txt", cfg);
  const bool deterministic = again.text() == first_report;

  const double mean = sum / 20.0;
  const bool pass = mean >= 3.0 && deterministic;
  return {pass, strprintf("20 pairs at 0 dB: mean delta %+.3f dB (need >= 3; min %+.3f, "
                          "max %+.3f), gate open %.2f%% of cells, rerun %s",
                          mean, min_delta, max_delta, 100.0 * open_cells / total_cells,
                          deterministic ? "identical" : "DIVERGED")};
}

// --- 10: end-to-end determinism ------------------------------------------------

Outcome criterion_determinism() {
  const std::string root = scratch("c10");
  const std::string corpus = scratch("c10/corpus");
  {
    hgc::AudioClip tone;
    tone.samples = testutil::oracle_clean_clip(4242);
    hgc::write_wav(root + "/tone.wav", tone);
    for (std::uint64_t i = 1; i <= 3; ++i) {
      hgc::AudioClip n;
      n.samples = testutil::gauss_noise(i, 0.01, 16000);
      hgc::write_wav(strprintf("%s/n%llu.wav", corpus.c_str(),
                               static_cast<unsigned long long>(i)),
                     n);
    }
  }
  if (run_cli("stats --in " + corpus + " --out " + root + "/stats.csv") != 0) {
    return {false, "stats subcommand failed"};
  }
  const std::string base = "analyze --in " + root + "/tone.wav --stats " + root + "/stats.csv";
  if (run_cli(base + " --outdir " + root + "/out_a") != 0 ||
      run_cli(base + " --outdir " + root + "/out_b") != 0 ||
      run_cli(base + " --outdir " + root + "/out_c --jobs 4") != 0) {
    return {false, "analyze subcommand failed"};
  }
  for (const char* name : {"pitch.csv", "rh.pgm", "ra.pgm", "rb.pgm", "vad.csv", "vrd.csv",
                           "gate.pgm"}) {
    const std::string a = testutil::slurp(root + "/out_a/" + name);
    if (a.empty()) return {false, strprintf("%s is missing or empty", name)};
    if (a != testutil::slurp(root + "/out_b/" + name)) {
      return {false, strprintf("%s differs between identical reruns", name)};
    }
    if (a != testutil::slurp(root + "/out_c/" + name)) {
      return {false, strprintf("%s differs under --jobs 4", name)};
    }
  }
  return {true, "7 artifact files byte-identical across reruns and --jobs 4"};
}

struct Criterion {
  int id;
  const char* name;
  Outcome (*fn)();
  double budget_s;  // 0 means no runtime bound
};

const Criterion kCriteria[] = {
    {1, "integral matrix fidelity", criterion_matrix, 1.0},
    {2, "pitch accuracy sweep", criterion_sweep, 60.0},
    {3, "pitch scale invariance", criterion_scale, 0.0},
    {4, "stft round trip", criterion_roundtrip, 0.0},
    {5, "gate algebra", criterion_gate, 0.0},
    {6, "energy label thresholds", criterion_thresholds, 0.0},
    {7, "mask apply oracles", criterion_masks, 0.0},
    {8, "compensator causality", criterion_causality, 0.0},
    {9, "oracle gate enhancement", criterion_oracle, 0.0},
    {10, "end-to-end determinism", criterion_determinism, 0.0},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty()) {
    for (const Criterion& c : kCriteria) which.push_back(c.id);
  }

  int failures = 0;
  for (const int id : which) {
    const Criterion* found = nullptr;
    for (const Criterion& c : kCriteria) {
      if (c.id == id) found = &c;
    }
    if (found == nullptr) {
      std::fprintf(stderr, "no criterion %d\n", id);
      ++failures;
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = found->fn();
    } catch (const std::exception& e) {
      outcome = {false, strprintf("exception: %s", e.what())};
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (found->budget_s > 0.0 && elapsed > found->budget_s) {
      outcome.pass = false;
      outcome.details += strprintf(" [over the %g s budget]", found->budget_s);
    }
    std::printf("[%s] %2d %s (%.2f s): %s\n", outcome.pass ? "PASS" : "FAIL", found->id,
                found->name, elapsed, outcome.details.c_str());
    if (!outcome.pass) ++failures;
  }
  return failures;
}
