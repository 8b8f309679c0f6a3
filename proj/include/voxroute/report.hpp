// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "voxroute/config.hpp"
#include "voxroute/pipeline.hpp"

namespace voxroute {

// count/total*100 computed in double, rounded to one decimal as printed
// (43/80 -> 53.8, 37/80 -> 46.2, 23/80 -> 28.7). nullopt when total is 0.
std::optional<double> percent(std::size_t count, std::size_t total);

struct SummaryReport {
  std::size_t total_samples = 0;
  std::size_t routed_count = 0;
  std::size_t online_count = 0;
  std::size_t offline_count = 0;
  std::size_t asr_correct_count = 0;
  std::size_t no_repair_correct_count = 0;
  std::size_t no_repair_correct_online_count = 0;
  std::size_t no_repair_correct_offline_count = 0;
  std::size_t end_to_end_no_repair_count = 0;
  std::size_t balancer_fired_count = 0;
  std::size_t probe_failed_count = 0;

  std::optional<double> routed_pct;
  std::optional<double> online_pct;
  std::optional<double> offline_pct;
  std::optional<double> asr_correct_pct;
  std::optional<double> no_repair_correct_pct;
  std::optional<double> no_repair_correct_online_pct;   // of online samples
  std::optional<double> no_repair_correct_offline_pct;  // of offline samples
  std::optional<double> end_to_end_no_repair_pct;

  // Means over raw (pre-balancer) metrics. Latency skips failed probes.
  std::optional<double> avg_cpu_pct;
  std::optional<double> avg_latency_ms;
  std::optional<double> avg_temp_c;
  // Same means over the metrics the router actually saw.
  std::optional<double> avg_cpu_pct_perturbed;
  std::optional<double> avg_latency_ms_perturbed;
  std::optional<double> avg_temp_c_perturbed;
  std::optional<double> avg_inference_latency_ms;

  bool operator==(const SummaryReport&) const = default;
};

SummaryReport compute_summary(const std::vector<SampleArtifact>& artifacts);

nlohmann::json summary_to_json(const SummaryReport& report);

// temperature.csv, latency.csv, workload.csv: "sample_index,value" rows in
// artifact order from the raw metrics. A failed probe leaves the value empty.
// Throws ArtifactIoError.
std::vector<std::filesystem::path> emit_plot_data(const std::vector<SampleArtifact>& artifacts,
                                                  const std::filesystem::path& out_dir);

struct ReplayOptions {
  std::filesystem::path runs_root = "runs";
  std::string run_id;  // empty: derived from the current UTC time
  bool canonical = false;
  std::optional<std::uint64_t> seed_override;
};

struct ReplayResult {
  std::filesystem::path run_dir;
  std::vector<SampleArtifact> artifacts;
  SummaryReport summary;
};

// Runs every sample in manifest order and writes
// <runs_root>/<run_id>/{artifacts/*.json, summary.json, plots/*.csv}. Unless
// the config names a history file, history lives in <run_dir>/history.jsonl
// so each replay starts from an empty table. Throws ConfigError,
// CorpusError or ArtifactIoError.
ReplayResult replay_corpus(const std::vector<CorpusSample>& corpus, AppConfig config, const ReplayOptions& options);

// Pretty-printed summary JSON. Throws ArtifactIoError.
void write_summary(const SummaryReport& report, const std::filesystem::path& path);

}  // namespace voxroute
