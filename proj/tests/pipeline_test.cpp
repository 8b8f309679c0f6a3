// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

#include "test_support.hpp"
#include "voxroute/pipeline.hpp"
#include "voxroute/serialize.hpp"

namespace voxroute {
namespace {

using Commands = std::vector<DeviceCommand>;

// Returns a fixed raw output (or failure) and remembers what it was asked.
class ScriptedBackend final : public InferenceBackend {
 public:
  ScriptedBackend(BackendId id, std::optional<std::string> output) : id_(id), output_(std::move(output)) {}
  BackendId id() const override { return id_; }
  std::string model_name() const override { return "scripted"; }
  InferenceResult infer(const PromptBundle& bundle, std::chrono::milliseconds) override {
    ++*calls;
    InferenceResult r;
    r.backend_id = id_;
    r.model_name = model_name();
    if (output_) {
      r.raw_output = *output_;
      r.succeeded = true;
    } else {
      r.failure_reason = "scripted failure";
    }
    last_user_text = bundle.user_text;
    return r;
  }
  std::shared_ptr<int> calls = std::make_shared<int>(0);
  std::string last_user_text;

 private:
  BackendId id_;
  std::optional<std::string> output_;
};

class BrokenDriver final : public DeviceDriver {
 public:
  void set_power(PowerState) override { throw std::runtime_error("bus timeout"); }
  DeviceState state() const override { return {}; }
};

CorpusSample sample(std::string id, std::string hyp, Commands expected = {},
                    FixtureMetrics m = {30, 40, 90}, std::string ref = "") {
  CorpusSample s;
  s.sample_id = std::move(id);
  s.reference_transcript = ref.empty() ? hyp : ref;
  s.hypothesis_transcript = std::move(hyp);
  s.expected_commands = std::move(expected);
  s.metrics = m;
  return s;
}

AppConfig quiet_config() {
  AppConfig cfg;
  cfg.balancer.enabled = false;
  cfg.metrics.provider = MetricsProvider::Fixture;
  cfg.backends.test_mode = true;
  return cfg;
}

class PipelineTest : public ::testing::Test {
 protected:
  testing::TempDir dir;
  HistoryStore history{dir / "history.jsonl"};
  DeviceRegistry registry{CommandVocabulary{}};

  Pipeline make(const AppConfig& cfg = quiet_config()) { return Pipeline(cfg, make_components(cfg), history, registry); }

  Pipeline make_scripted(std::optional<std::string> online, std::optional<std::string> offline,
                         const AppConfig& cfg = quiet_config()) {
    auto c = make_components(cfg);
    c.online = std::make_unique<ScriptedBackend>(BackendId::Online, std::move(online));
    c.offline = std::make_unique<ScriptedBackend>(BackendId::Offline, std::move(offline));
    return Pipeline(cfg, std::move(c), history, registry);
  }
};

TEST_F(PipelineTest, SimpleCommandRunsOnline) {
  auto p = make();
  auto a = p.run(sample("s1", "turn on light one", {{"turn_on", "light", 1}}));
  EXPECT_EQ(a.decision.mode, InferenceMode::Online);
  EXPECT_FALSE(a.metrics.perturbation.fired);
  ASSERT_EQ(a.commands.size(), 1u);
  EXPECT_EQ(a.commands[0].parsed, (DeviceCommand{"turn_on", "light", 1}));
  ASSERT_TRUE(a.commands[0].execution);
  EXPECT_EQ(a.commands[0].execution->status, ExecutionStatus::Executed);
  EXPECT_EQ(a.terminal_status, TerminalStatus::Executed);
  EXPECT_TRUE(a.no_repair_correct);
  EXPECT_TRUE(a.transcript.asr_correct);
  EXPECT_EQ(registry.device_state("light", 1).power, PowerState::On);
  ASSERT_EQ(history.records().size(), 1u);
  EXPECT_EQ(history.records()[0].sample_id, "s1");
}

TEST_F(PipelineTest, MissingIndexIsRepairedFromDefault) {
  auto p = make();
  auto a = p.run(sample("s1", "turn on the light", {{"turn_on", "light", std::nullopt}}));
  ASSERT_EQ(a.commands.size(), 1u);
  EXPECT_EQ(a.commands[0].repair.status, RepairStatus::Repaired);
  EXPECT_EQ(canonical_text(a.commands[0].repair.command), "turn on light 1");
  EXPECT_EQ(a.commands[0].execution->status, ExecutionStatus::Executed);
  EXPECT_FALSE(a.no_repair_correct);
  EXPECT_EQ(a.terminal_status, TerminalStatus::Executed);
}

TEST_F(PipelineTest, RepairLearnsFromEarlierSamples) {
  auto p = make();
  p.run(sample("s1", "turn on light two"));
  p.run(sample("s2", "turn on light two"));
  p.run(sample("s3", "turn on light one"));
  auto a = p.run(sample("s4", "turn on the light"));
  EXPECT_EQ(a.commands[0].repair.command.index, 2);
  EXPECT_EQ(a.commands[0].repair.repairs_applied[0].source, RepairSource::History);
}

TEST_F(PipelineTest, IrrelevantInputIsStillRouted) {
  auto p = make();
  auto a = p.run(sample("s1", "what is the weather"));
  EXPECT_TRUE(a.commands.empty());
  EXPECT_EQ(a.terminal_status, TerminalStatus::NoCommand);
  EXPECT_TRUE(a.no_repair_correct);
  EXPECT_TRUE(history.records().empty());
}

TEST_F(PipelineTest, UnsupportedDeviceIsRejectedNotExecuted) {
  auto p = make();
  auto a = p.run(sample("s1", "turn on the oven"));
  ASSERT_EQ(a.commands.size(), 1u);
  EXPECT_EQ(a.commands[0].repair.status, RepairStatus::Irreparable);
  EXPECT_FALSE(a.commands[0].execution);
  EXPECT_EQ(a.terminal_status, TerminalStatus::RejectedAll);
  EXPECT_TRUE(history.records().empty());
}

TEST_F(PipelineTest, CompoundWithOneBadMemberIsPartial) {
  auto p = make();
  auto a = p.run(sample("s1", "turn on light one and turn off speaker two"));
  ASSERT_EQ(a.commands.size(), 2u);
  EXPECT_EQ(a.commands[0].execution->status, ExecutionStatus::Executed);
  EXPECT_FALSE(a.commands[1].execution);
  EXPECT_EQ(a.terminal_status, TerminalStatus::PartiallyExecuted);
}

TEST_F(PipelineTest, HighLatencyRoutesOffline) {
  auto p = make_scripted(R"([{"action":"turn_on","device":"light","index":1}])", "[]");
  auto a = p.run(sample("s1", "turn on light one", {}, {10, 30, 200}));
  EXPECT_EQ(a.decision.mode, InferenceMode::Offline);
  EXPECT_EQ(a.inference.backend_id, BackendId::Offline);
  EXPECT_EQ(a.terminal_status, TerminalStatus::NoCommand);
}

TEST_F(PipelineTest, RoutingUsesPerturbedMetrics) {
  auto cfg = quiet_config();
  cfg.balancer.enabled = true;
  cfg.balancer.probability = 1.0;
  auto p = make_scripted("[]", "[]", cfg);
  auto a = p.run(sample("s1", "turn on light one", {}, {10, 30, 50}));
  EXPECT_TRUE(a.metrics.perturbation.fired);
  EXPECT_DOUBLE_EQ(a.metrics.raw.cpu_pct, 10);
  EXPECT_EQ(a.decision.metrics_used, a.metrics.perturbation.perturbed);
  EXPECT_EQ(a.decision.mode, InferenceMode::Offline);
  EXPECT_EQ(a.inference.backend_id, BackendId::Offline);
}

TEST_F(PipelineTest, InferenceFailureIsAStatus) {
  auto p = make_scripted(std::nullopt, std::nullopt);
  auto a = p.run(sample("s1", "turn on light one", {{"turn_on", "light", 1}}));
  EXPECT_EQ(a.terminal_status, TerminalStatus::InferenceFailed);
  EXPECT_EQ(a.inference.failure_reason, "scripted failure");
  EXPECT_FALSE(a.no_repair_correct);
  EXPECT_TRUE(a.commands.empty());
}

TEST_F(PipelineTest, EmptyTranscriptSkipsInference) {
  auto c = make_components(quiet_config());
  auto backend = std::make_unique<ScriptedBackend>(BackendId::Online, "[]");
  auto calls = backend->calls;
  c.online = std::move(backend);
  Pipeline p(quiet_config(), std::move(c), history, registry);
  auto a = p.run(sample("s1", ""));
  EXPECT_EQ(*calls, 0);
  EXPECT_EQ(a.terminal_status, TerminalStatus::InferenceFailed);
  EXPECT_EQ(a.inference.failure_reason, "empty transcript");
}

TEST_F(PipelineTest, UnparseableOutputIsNoCommand) {
  auto p = make_scripted("I cannot help with that.", "");
  auto a = p.run(sample("s1", "turn on light one"));
  ASSERT_TRUE(a.parse_error);
  EXPECT_EQ(a.terminal_status, TerminalStatus::NoCommand);
  EXPECT_FALSE(a.no_repair_correct);
}

TEST_F(PipelineTest, ProseWrappedOutputParses) {
  auto p = make_scripted(R"(Sure! [{"action":"turn_off","device":"speaker","index":1}])", "");
  auto a = p.run(sample("s1", "turn off speaker one", {{"turn_off", "speaker", 1}}));
  EXPECT_TRUE(a.no_repair_correct);
  EXPECT_EQ(a.terminal_status, TerminalStatus::Executed);
}

TEST_F(PipelineTest, DriverErrorLogsFailureRecord) {
  registry.replace_driver("speaker", 1, std::make_unique<BrokenDriver>());
  auto p = make();
  auto a = p.run(sample("s1", "turn on speaker one"));
  EXPECT_EQ(a.commands[0].execution->status, ExecutionStatus::DriverError);
  EXPECT_EQ(a.terminal_status, TerminalStatus::RejectedAll);
  ASSERT_EQ(history.records().size(), 1u);
  EXPECT_EQ(history.records()[0].outcome, ExecutionOutcome::Failure);
  EXPECT_EQ(history.most_frequent_index("speaker", "turn_on"), std::nullopt);
}

TEST_F(PipelineTest, HistoryWriteFailureDegradesLoggingOnly) {
  testing::spit(dir / "blocker", "");
  HistoryStore broken(dir / "blocker" / "h.jsonl");
  auto cfg = quiet_config();
  Pipeline p(cfg, make_components(cfg), broken, registry);
  auto a = p.run(sample("s1", "turn on light one"));
  EXPECT_TRUE(a.logging_degraded);
  ASSERT_TRUE(a.logging_error);
  EXPECT_EQ(a.terminal_status, TerminalStatus::Executed);
  EXPECT_EQ(registry.device_state("light", 1).power, PowerState::On);
}

TEST_F(PipelineTest, AsrCorrectnessUsesNormalizedExactMatch) {
  auto p = make();
  EXPECT_TRUE(p.run(sample("a", "Turn on light one.", {}, {30, 40, 90}, "turn on light one")).transcript.asr_correct);
  EXPECT_FALSE(p.run(sample("b", "turn on light 1", {}, {30, 40, 90}, "turn on light one")).transcript.asr_correct);
}

TEST_F(PipelineTest, StagesReportedInOrder) {
  auto p = make();
  auto a = p.run(sample("s1", "turn on light one"));
  ASSERT_EQ(a.timings.size(), std::size(kStageOrder));
  for (std::size_t i = 0; i < a.timings.size(); ++i) {
    EXPECT_EQ(a.timings[i].stage, kStageOrder[i]);
    EXPECT_GE(a.timings[i].ms, 0.0);
  }
}

TEST_F(PipelineTest, ArtifactRoundTripsThroughDisk) {
  auto p = make();
  auto a = p.run(sample("s7", "turn on the light and turn on the oven", {}, {30, 40, 90}), 6);
  auto path = write_artifact(a, dir.path());
  EXPECT_EQ(path.filename(), "s7.json");
  EXPECT_EQ(read_artifact(path), a);

  auto canon = a;
  canonicalize(canon);
  EXPECT_EQ(canon.metrics.raw.sampled_at, Timestamp{});
  EXPECT_EQ(canon.inference.latency_ms, 0.0);
  for (const auto& t : canon.timings) EXPECT_EQ(t.ms, 0.0);
}

TEST_F(PipelineTest, UnreachableLatencyRoundTrips) {
  auto p = make();
  auto s = sample("s1", "turn on light one");
  s.metrics->latency_ms = -1;  // rejected by the sampler -> probe failure
  auto a = p.run(s);
  EXPECT_TRUE(a.metrics.raw.probe_failed);
  EXPECT_EQ(a.decision.mode, InferenceMode::Offline);
  const json j = a;
  EXPECT_TRUE(j.at("metrics").at("raw").at("latency_ms").is_null());
  EXPECT_EQ(read_artifact(write_artifact(a, dir.path())), a);
}

TEST_F(PipelineTest, InvalidUtf8TranscriptStillWritesArtifact) {
  auto p = make();
  auto a = p.run(sample("s1", "turn on light one \xff\xfe"));
  const auto back = read_artifact(write_artifact(a, dir.path()));
  EXPECT_EQ(back.transcript.hypothesis, "turn on light one \xEF\xBF\xBD\xEF\xBF\xBD");
  EXPECT_EQ(back.decision, a.decision);
}

TEST_F(PipelineTest, WriteArtifactNeedsADirectory) {
  SampleArtifact a;
  a.sample_id = "x";
  EXPECT_THROW(write_artifact(a, dir / "missing"), ArtifactIoError);
  EXPECT_THROW(read_artifacts(dir / "missing"), ArtifactIoError);
  testing::spit(dir / "bad.json", "{");
  EXPECT_THROW(read_artifact(dir / "bad.json"), ArtifactIoError);
}

TEST_F(PipelineTest, ReadArtifactsSortsByCorpusPosition) {
  auto p = make();
  std::filesystem::create_directories(dir / "art");
  for (auto [id, idx] : {std::pair{"zz", 0}, {"aa", 2}, {"mm", 1}}) {
    write_artifact(p.run(sample(id, "hello"), idx), dir / "art");
  }
  auto all = read_artifacts(dir / "art");
  ASSERT_EQ(all.size(), 3u);
  EXPECT_EQ(all[0].sample_id, "zz");
  EXPECT_EQ(all[1].sample_id, "mm");
  EXPECT_EQ(all[2].sample_id, "aa");
}

// Every Success record in history corresponds to exactly one Executed entry,
// and nothing irreparable reaches a driver.
TEST_F(PipelineTest, HistoryCouplingOverRandomUtterances) {
  auto cfg = quiet_config();
  cfg.balancer.enabled = true;
  cfg.balancer.seed = 5;
  auto p = make(cfg);
  std::mt19937_64 rng(53);
  const std::vector<std::string> parts{"turn on", "turn off", "switch on", "light", "lights", "speaker", "oven",
                                       "one",     "two",      "three",     "and",   "the",    "please",  "five"};
  std::size_t executed = 0;
  for (int i = 0; i < 300; ++i) {
    std::string text;
    for (int k = 1 + static_cast<int>(rng() % 8); k > 0; --k) text += parts[rng() % parts.size()] + " ";
    auto a = p.run(sample("r" + std::to_string(i), text), i);
    for (const auto& c : a.commands) {
      if (c.repair.status == RepairStatus::Irreparable) {
        EXPECT_FALSE(c.execution);
      }
      if (c.execution && c.execution->status == ExecutionStatus::Executed) ++executed;
      EXPECT_EQ(c.repair.command.action, c.parsed.action);
      EXPECT_EQ(c.repair.command.device, c.parsed.device);
    }
  }
  std::size_t successes = 0;
  for (const auto& r : history.records()) successes += r.outcome == ExecutionOutcome::Success;
  EXPECT_EQ(successes, executed);
}

TEST(PipelineSetup, RejectsMissingComponents) {
  testing::TempDir dir;
  HistoryStore h(dir / "h.jsonl");
  DeviceRegistry reg{CommandVocabulary{}};
  EXPECT_THROW(Pipeline(quiet_config(), PipelineComponents{}, h, reg), std::invalid_argument);
}

TEST(PipelineSetup, OfflineWithoutCommandFailsPerSample) {
  testing::TempDir dir;
  HistoryStore h(dir / "h.jsonl");
  DeviceRegistry reg{CommandVocabulary{}};
  auto cfg = quiet_config();
  cfg.backends.test_mode = false;
  Pipeline p(cfg, make_components(cfg), h, reg);
  auto a = p.run(sample("s1", "turn on light one", {}, {10, 30, 500}));
  EXPECT_EQ(a.decision.mode, InferenceMode::Offline);
  EXPECT_EQ(a.terminal_status, TerminalStatus::InferenceFailed);
}

}  // namespace
}  // namespace voxroute
