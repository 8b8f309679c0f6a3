// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "voxroute/asr.hpp"
#include "voxroute/command.hpp"
#include "voxroute/config.hpp"
#include "voxroute/corpus.hpp"
#include "voxroute/execution.hpp"
#include "voxroute/history.hpp"
#include "voxroute/inference.hpp"
#include "voxroute/metrics.hpp"
#include "voxroute/router.hpp"

namespace voxroute {

enum class TerminalStatus { Executed, PartiallyExecuted, RejectedAll, NoCommand, InferenceFailed };

std::string_view to_string(TerminalStatus s);
TerminalStatus terminal_status_from_string(std::string_view s);

struct TranscriptRecord {
  std::optional<std::string> reference;
  std::string hypothesis;
  bool asr_correct = false;
  TranscriptSource source = TranscriptSource::Fixture;
  bool degraded = false;

  bool operator==(const TranscriptRecord&) const = default;
};

struct MetricsRecord {
  SystemMetrics raw;
  PerturbationRecord perturbation;

  bool operator==(const MetricsRecord&) const = default;
};

struct CommandEntry {
  DeviceCommand parsed;
  ValidationReport validation;
  RepairOutcome repair;
  std::optional<ExecutionResult> execution;

  bool operator==(const CommandEntry&) const = default;
};

struct StageTiming {
  std::string stage;
  double ms = 0.0;

  bool operator==(const StageTiming&) const = default;
};

// Stage names in execution order.
inline constexpr std::string_view kStageOrder[] = {"transcribe", "metrics", "balance", "route",   "infer",
                                                   "parse",      "validate", "repair", "execute", "log"};

// Everything one utterance went through, written as <sample_id>.json.
struct SampleArtifact {
  std::string sample_id;
  std::size_t sample_index = 0;  // position in the corpus, 0-based
  std::optional<SampleCategory> category;
  TranscriptRecord transcript;
  MetricsRecord metrics;
  RoutingDecision decision;
  InferenceResult inference;
  std::optional<ParseFailure> parse_error;
  std::vector<CommandEntry> commands;
  std::vector<DeviceCommand> expected_commands;
  // Every parsed command validated clean without repair and the parsed list
  // equals the expected list.
  bool no_repair_correct = false;
  TerminalStatus terminal_status = TerminalStatus::NoCommand;
  bool logging_degraded = false;
  std::optional<std::string> logging_error;
  std::vector<StageTiming> timings;

  bool operator==(const SampleArtifact&) const = default;
};

// Zeroes every wall-clock dependent field (timestamps, latencies measured
// around inference, stage timings) so replays can be compared byte for byte.
void canonicalize(SampleArtifact& artifact);

class ArtifactIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Writes <out_dir>/<sample_id>.json (pretty-printed, keys sorted), replacing
// any previous file. Throws ArtifactIoError.
std::filesystem::path write_artifact(const SampleArtifact& artifact, const std::filesystem::path& out_dir);
SampleArtifact read_artifact(const std::filesystem::path& path);
// All *.json artifacts in a directory, ordered by sample_index.
std::vector<SampleArtifact> read_artifacts(const std::filesystem::path& dir);

// Where the metrics snapshot for a sample comes from.
class MetricsSampler {
 public:
  virtual ~MetricsSampler() = default;
  virtual SystemMetrics sample(const CorpusSample& sample) = 0;
};

// Uses the sample's recorded metrics, or `fallback` when it has none.
class FixtureMetricsSampler final : public MetricsSampler {
 public:
  explicit FixtureMetricsSampler(FixtureMetrics fallback) : fallback_(fallback) {}
  SystemMetrics sample(const CorpusSample& sample) override;

 private:
  FixtureMetrics fallback_;
};

// Live host readers.
class LiveMetricsSampler final : public MetricsSampler {
 public:
  explicit LiveMetricsSampler(MetricProviders providers) : providers_(std::move(providers)) {}
  SystemMetrics sample(const CorpusSample&) override { return sample_system(providers_); }

 private:
  MetricProviders providers_;
};

struct PipelineComponents {
  std::unique_ptr<Transcriber> transcriber;
  std::unique_ptr<MetricsSampler> sampler;
  std::unique_ptr<InferenceBackend> online;
  std::unique_ptr<InferenceBackend> offline;
};

// Builds the adapters a config asks for. test_mode puts the template backend
// on both paths; the online API key is read from the named environment
// variable.
PipelineComponents make_components(const AppConfig& config);

// Runs samples one after another: transcribe, sample metrics, balance,
// route, infer, parse, validate, repair, execute, log. Samples must run
// sequentially because repair reads the history earlier samples wrote.
class Pipeline {
 public:
  Pipeline(const AppConfig& config, PipelineComponents components, HistoryStore& history,
           DeviceRegistry& registry);

  // Never throws for per-sample problems; they end up in terminal_status,
  // inference.failure_reason, parse_error or logging_error.
  SampleArtifact run(const CorpusSample& sample, std::size_t sample_index = 0);

  const MetricBalancer& balancer() const { return balancer_; }

 private:
  RoutingThresholds thresholds_;
  CommandVocabulary vocab_;
  std::chrono::milliseconds backend_timeout_;
  PipelineComponents components_;
  MetricBalancer balancer_;
  HistoryStore& history_;
  DeviceRegistry& registry_;
};

}  // namespace voxroute
