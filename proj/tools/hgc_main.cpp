#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "hgc/common.hpp"
#include "hgc/parallel.hpp"
#include "hgc/pipeline.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  int jobs = 0;
  std::string vad_override;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "key=value config file");
  cmd->add_option("--jobs", opts.jobs, "Worker threads (default: all cores)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--vad-override", opts.vad_override, "Force voice activity on or off")
      ->check(CLI::IsMember({"auto", "on", "off"}));
}

// Config file first, explicit flags on top.
hgc::PipelineConfig build_config(const CommonOpts& opts) {
  hgc::PipelineConfig cfg;
  if (!opts.config_path.empty()) cfg = hgc::load_config_file(opts.config_path);
  if (!opts.vad_override.empty()) {
    hgc::apply_config_entry(cfg, "vad_override", opts.vad_override);
  }
  if (opts.jobs > 0) hgc::set_threads(opts.jobs);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pitch-gated spectral analysis for 16 kHz speech"};
  app.require_subcommand(1);

  CommonOpts stats_opts;
  std::string stats_in;
  std::string stats_out;
  CLI::App* stats = app.add_subcommand(
      "stats", "Aggregate per-bin log-energy statistics over a directory of WAV clips");
  stats->add_option("--in", stats_in, "Directory holding *.wav clips")->required();
  stats->add_option("--out", stats_out, "Output statistics CSV")->required();
  add_common(stats, stats_opts);

  CommonOpts analyze_opts;
  std::string analyze_in;
  std::string analyze_stats;
  std::string analyze_outdir;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "Pitch track, energy labels, activity flags and the composed gate for one clip");
  analyze->add_option("--in", analyze_in, "Input WAV")->required();
  analyze->add_option("--stats", analyze_stats, "Statistics CSV from the stats subcommand")
      ->required();
  analyze->add_option("--outdir", analyze_outdir, "Directory for the emitted files")->required();
  add_common(analyze, analyze_opts);

  CommonOpts oracle_opts;
  std::string oracle_noisy;
  std::string oracle_clean;
  std::string oracle_stats;
  std::string oracle_out;
  std::string oracle_report;
  CLI::App* oracle = app.add_subcommand(
      "oracle", "Best-case gated compensation of a noisy clip against its clean reference");
  oracle->add_option("--noisy", oracle_noisy, "Noisy input WAV")->required();
  oracle->add_option("--clean", oracle_clean, "Clean reference WAV")->required();
  oracle->add_option("--stats", oracle_stats, "Statistics CSV from the stats subcommand")
      ->required();
  oracle->add_option("--out", oracle_out, "Enhanced output WAV")->required();
  oracle->add_option("--report", oracle_report, "Report text file")->required();
  add_common(oracle, oracle_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (stats->parsed()) {
      const hgc::PipelineConfig cfg = build_config(stats_opts);
      const hgc::StatsResult result = hgc::run_stats(stats_in, stats_out, cfg);
      std::printf("clips=%zu\n", result.stats.clip_count);
    } else if (analyze->parsed()) {
      const hgc::PipelineConfig cfg = build_config(analyze_opts);
      hgc::run_analyze(analyze_in, analyze_stats, analyze_outdir, cfg);
    } else if (oracle->parsed()) {
      const hgc::PipelineConfig cfg = build_config(oracle_opts);
      const hgc::OracleReport report =
          hgc::run_oracle_gate(oracle_noisy, oracle_clean, oracle_stats, oracle_out,
                               oracle_report, cfg);
      std::fputs(report.text().c_str(), stdout);
    }
  } catch (const hgc::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const hgc::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
