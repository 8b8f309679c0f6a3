// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

// voxroute: run one utterance, replay a corpus, summarize or plot a run.
//
// Exit codes: 0 success, 1 usage/config/corpus error, 2 environment or I/O.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "voxroute/config.hpp"
#include "voxroute/corpus.hpp"
#include "voxroute/pipeline.hpp"
#include "voxroute/report.hpp"
#include "voxroute/serialize.hpp"

namespace fs = std::filesystem;
using namespace voxroute;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitEnvironment = 2;

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out = "runs";
  bool canonical = false;
};

AppConfig resolve_config(const GlobalOptions& g) {
  AppConfig cfg = g.config_path.empty() ? AppConfig{} : load_config(g.config_path);
  if (g.seed) {
    cfg.balancer.seed = *g.seed;
  }
  cfg.check();
  return cfg;
}

int cmd_run(const GlobalOptions& g, const std::string& text, const std::string& audio, bool text_given) {
  AppConfig cfg = resolve_config(g);
  CorpusSample sample;
  sample.sample_id = "run";
  if (text_given) {
    // Rejects an empty utterance before anything runs.
    (void)build_prompt(text, cfg.vocab);
    sample.hypothesis_transcript = text;
    cfg.asr.adapter = AsrAdapter::Fixture;
  } else {
    if (cfg.asr.adapter != AsrAdapter::External) {
      throw ConfigError("--audio needs asr.adapter = \"external\" in the config");
    }
    sample.audio_path = audio;
  }

  std::error_code ec;
  fs::create_directories(g.out, ec);
  if (ec) {
    throw ArtifactIoError("cannot create output directory " + g.out + ": " + ec.message());
  }
  const fs::path history_path = cfg.history.path.value_or(fs::path(g.out) / "history.jsonl");
  HistoryStore history = HistoryStore::load(history_path);
  DeviceRegistry registry(cfg.vocab);
  Pipeline pipeline(cfg, make_components(cfg), history, registry);

  SampleArtifact art = pipeline.run(sample, 0);
  if (g.canonical) {
    canonicalize(art);
  }
  std::cout << json(art).dump(2, ' ', false, json::error_handler_t::replace) << '\n';
  return 0;
}

int cmd_replay(const GlobalOptions& g, const std::string& manifest, const std::string& run_id) {
  AppConfig cfg = resolve_config(g);
  const auto corpus = load_corpus(manifest, cfg.asr.adapter);
  ReplayOptions opts;
  opts.runs_root = g.out;
  opts.run_id = run_id;
  opts.canonical = g.canonical;
  const auto result = replay_corpus(corpus, cfg, opts);
  const auto& s = result.summary;
  std::cerr << "replayed " << s.total_samples << " samples: online " << s.online_count << ", offline "
            << s.offline_count << '\n';
  std::cout << result.run_dir.string() << '\n';
  return 0;
}

int cmd_report(const std::string& run_dir) {
  const auto artifacts = read_artifacts(fs::path(run_dir) / "artifacts");
  const auto summary = compute_summary(artifacts);
  write_summary(summary, fs::path(run_dir) / "summary.json");
  std::cout << summary_to_json(summary).dump(2) << '\n';
  return 0;
}

int cmd_plot(const std::string& run_dir) {
  const auto artifacts = read_artifacts(fs::path(run_dir) / "artifacts");
  for (const auto& p : emit_plot_data(artifacts, fs::path(run_dir) / "plots")) {
    std::cout << p.string() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metric-aware speech-to-action pipeline and corpus replay harness"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config_path, "JSON config file")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "Balancer seed (overrides balancer.seed)");
  app.add_option("--out", g.out, "Output root directory")->capture_default_str();
  app.add_flag("--canonical", g.canonical, "Zero timestamps and timings for byte-stable output");

  std::string text;
  std::string audio;
  auto* run = app.add_subcommand("run", "Run one utterance end to end and print its artifact");
  auto* text_opt = run->add_option("--text", text, "Utterance text (skips ASR)");
  auto* audio_opt = run->add_option("--audio", audio, "Audio file for the external transcriber");
  text_opt->excludes(audio_opt);
  run->require_option(1);

  std::string manifest;
  std::string run_id;
  auto* replay = app.add_subcommand("replay", "Replay a corpus manifest into runs/<run_id>/");
  replay->add_option("manifest", manifest, "Corpus manifest (JSON)")->required();
  replay->add_option("--run-id", run_id, "Run directory name (default: UTC timestamp)");

  std::string run_dir;
  auto* report = app.add_subcommand("report", "Recompute summary.json from a run's artifacts");
  report->add_option("run_dir", run_dir, "Run directory")->required()->check(CLI::ExistingDirectory);
  auto* plot = app.add_subcommand("plot", "Write per-sample plot CSVs for a run");
  plot->add_option("run_dir", run_dir, "Run directory")->required()->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }
  if (*seed_opt) {
    g.seed = seed;
  }

  try {
    if (*run) return cmd_run(g, text, audio, static_cast<bool>(*text_opt));
    if (*replay) return cmd_replay(g, manifest, run_id);
    if (*report) return cmd_report(run_dir);
    if (*plot) return cmd_plot(run_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CorpusError& e) {
    std::cerr << "corpus error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitEnvironment;
  }
  return kExitUsage;
}
