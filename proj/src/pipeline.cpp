// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxroute/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "voxroute/serialize.hpp"

namespace voxroute {

namespace {

using Clock = std::chrono::steady_clock;

class StageTimer {
 public:
  void add(std::string_view stage, Clock::time_point start) {
    totals_[std::string(stage)] +=
        std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  }

  std::vector<StageTiming> ordered() const {
    std::vector<StageTiming> out;
    for (auto stage : kStageOrder) {
      auto it = totals_.find(std::string(stage));
      out.push_back({std::string(stage), it == totals_.end() ? 0.0 : it->second});
    }
    return out;
  }

 private:
  std::map<std::string, double> totals_;
};

SystemMetrics zero_time(SystemMetrics m) {
  m.sampled_at = Timestamp{};
  return m;
}

}  // namespace

std::string_view to_string(TerminalStatus s) {
  switch (s) {
    case TerminalStatus::Executed:
      return "executed";
    case TerminalStatus::PartiallyExecuted:
      return "partially_executed";
    case TerminalStatus::RejectedAll:
      return "rejected_all";
    case TerminalStatus::NoCommand:
      return "no_command";
    case TerminalStatus::InferenceFailed:
      return "inference_failed";
  }
  return "?";
}

TerminalStatus terminal_status_from_string(std::string_view s) {
  if (s == "executed") return TerminalStatus::Executed;
  if (s == "partially_executed") return TerminalStatus::PartiallyExecuted;
  if (s == "rejected_all") return TerminalStatus::RejectedAll;
  if (s == "no_command") return TerminalStatus::NoCommand;
  if (s == "inference_failed") return TerminalStatus::InferenceFailed;
  throw std::invalid_argument("unknown terminal status: " + std::string(s));
}

void canonicalize(SampleArtifact& a) {
  a.metrics.raw = zero_time(a.metrics.raw);
  a.metrics.perturbation.original = zero_time(a.metrics.perturbation.original);
  a.metrics.perturbation.perturbed = zero_time(a.metrics.perturbation.perturbed);
  a.decision.metrics_used = zero_time(a.decision.metrics_used);
  a.inference.latency_ms = 0.0;
  for (auto& c : a.commands) {
    if (c.execution && c.execution->state_after) {
      c.execution->state_after->last_changed_at = Timestamp{};
    }
  }
  for (auto& t : a.timings) {
    t.ms = 0.0;
  }
}

std::filesystem::path write_artifact(const SampleArtifact& artifact, const std::filesystem::path& out_dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(out_dir, ec)) {
    throw ArtifactIoError("artifact directory does not exist: " + out_dir.string());
  }
  const auto path = out_dir / (artifact.sample_id + ".json");
  const auto tmp = out_dir / (artifact.sample_id + ".json.tmp");
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) {
      throw ArtifactIoError("cannot write artifact: " + tmp.string());
    }
    out << json(artifact).dump(2, ' ', false, json::error_handler_t::replace) << '\n';
    if (!out.flush()) {
      throw ArtifactIoError("failed writing artifact: " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw ArtifactIoError("cannot move artifact into place: " + path.string() + ": " + ec.message());
  }
  return path;
}

SampleArtifact read_artifact(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ArtifactIoError("cannot read artifact: " + path.string());
  }
  try {
    return json::parse(in).get<SampleArtifact>();
  } catch (const std::exception& e) {
    throw ArtifactIoError("malformed artifact " + path.string() + ": " + e.what());
  }
}

std::vector<SampleArtifact> read_artifacts(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw ArtifactIoError("not an artifact directory: " + dir.string());
  }
  std::vector<SampleArtifact> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      out.push_back(read_artifact(entry.path()));
    }
  }
  std::sort(out.begin(), out.end(), [](const SampleArtifact& a, const SampleArtifact& b) {
    return a.sample_index != b.sample_index ? a.sample_index < b.sample_index : a.sample_id < b.sample_id;
  });
  return out;
}

SystemMetrics FixtureMetricsSampler::sample(const CorpusSample& sample) {
  const FixtureMetrics m = sample.metrics.value_or(fallback_);
  MetricProviders providers;
  providers.cpu = [v = m.cpu_pct] { return std::optional<double>(v); };
  providers.temp = [v = m.temp_c] { return std::optional<double>(v); };
  providers.latency = [v = m.latency_ms] { return std::optional<double>(v); };
  return sample_system(providers);
}

PipelineComponents make_components(const AppConfig& config) {
  PipelineComponents c;

  if (config.asr.adapter == AsrAdapter::External) {
    c.transcriber = std::make_unique<ExternalTranscriber>(config.asr.command,
                                                          std::chrono::milliseconds(config.asr.timeout_ms));
  } else {
    c.transcriber = std::make_unique<FixtureTranscriber>();
  }

  if (config.metrics.provider == MetricsProvider::Fixture) {
    c.sampler = std::make_unique<FixtureMetricsSampler>(config.metrics.fixture);
  } else {
    const std::string endpoint =
        config.probe.endpoint.empty() ? config.backends.online_base_url : config.probe.endpoint;
    const auto timeout = std::chrono::milliseconds(config.probe.timeout_ms);
    auto probe = std::make_shared<LatencyProbe>(
        config.probe.window, [endpoint, timeout] { return measure_http_round_trip(endpoint, timeout); });
    MetricProviders providers;
    providers.cpu = make_proc_cpu_reader();
    providers.temp = make_thermal_zone_reader(config.metrics.thermal_root);
    providers.latency = [probe]() -> std::optional<double> {
      const double mean = probe->probe();
      if (!std::isfinite(mean)) {
        return std::nullopt;
      }
      return mean;
    };
    c.sampler = std::make_unique<LiveMetricsSampler>(std::move(providers));
  }

  if (config.backends.test_mode) {
    c.online = std::make_unique<TemplateBackend>();
    c.offline = std::make_unique<TemplateBackend>();
  } else {
    std::string key;
    if (const char* env = std::getenv(config.backends.online_api_key_env.c_str())) {
      key = env;
    }
    c.online = std::make_unique<ChatCompletionBackend>(config.backends.online_base_url,
                                                       config.backends.online_model, key);
    std::vector<std::string> argv;
    if (!config.backends.offline_command.empty()) {
      argv.push_back(config.backends.offline_command);
      argv.insert(argv.end(), config.backends.offline_args.begin(), config.backends.offline_args.end());
    }
    c.offline = std::make_unique<ProcessBackend>(std::move(argv), config.backends.offline_model);
  }
  return c;
}

Pipeline::Pipeline(const AppConfig& config, PipelineComponents components, HistoryStore& history,
                   DeviceRegistry& registry)
    : thresholds_(config.thresholds),
      vocab_(config.vocab),
      backend_timeout_(config.backends.timeout_ms),
      components_(std::move(components)),
      balancer_(config.balancer),
      history_(history),
      registry_(registry) {
  if (!components_.transcriber || !components_.sampler || !components_.online || !components_.offline) {
    throw std::invalid_argument("pipeline needs a transcriber, a metrics sampler and two backends");
  }
}

SampleArtifact Pipeline::run(const CorpusSample& sample, std::size_t sample_index) {
  SampleArtifact art;
  art.sample_id = sample.sample_id;
  art.sample_index = sample_index;
  art.category = sample.category;
  art.expected_commands = sample.expected_commands;
  StageTimer timer;

  auto t0 = Clock::now();
  Transcript transcript =
      components_.transcriber->transcribe({sample.hypothesis_transcript, sample.reference_transcript, sample.audio_path});
  art.transcript.reference = transcript.reference;
  art.transcript.hypothesis = transcript.hypothesis;
  art.transcript.source = transcript.source;
  art.transcript.degraded = transcript.degraded;
  art.transcript.asr_correct =
      transcript.reference && !transcript.degraded && transcripts_match(transcript.hypothesis, *transcript.reference);
  timer.add("transcribe", t0);

  t0 = Clock::now();
  art.metrics.raw = components_.sampler->sample(sample);
  timer.add("metrics", t0);

  t0 = Clock::now();
  art.metrics.perturbation = balancer_.perturb(art.metrics.raw);
  timer.add("balance", t0);

  t0 = Clock::now();
  art.decision = decide(art.metrics.perturbation.perturbed, thresholds_);
  timer.add("route", t0);

  t0 = Clock::now();
  InferenceBackend& backend =
      art.decision.mode == InferenceMode::Online ? *components_.online : *components_.offline;
  if (transcript.hypothesis.empty()) {
    art.inference.backend_id = backend.id();
    art.inference.model_name = backend.model_name();
    art.inference.failure_reason = "empty transcript";
  } else {
    try {
      art.inference = backend.infer(build_prompt(transcript.hypothesis, vocab_), backend_timeout_);
    } catch (const std::exception& e) {
      art.inference.backend_id = backend.id();
      art.inference.model_name = backend.model_name();
      art.inference.failure_reason = e.what();
    }
  }
  timer.add("infer", t0);

  bool any_executed = false;
  bool all_executed = true;
  bool all_clean = true;
  std::vector<DeviceCommand> parsed;

  if (!art.inference.succeeded) {
    art.inference.raw_output.clear();
    art.terminal_status = TerminalStatus::InferenceFailed;
  } else {
    t0 = Clock::now();
    auto result = parse_model_output(art.inference.raw_output);
    timer.add("parse", t0);
    if (auto* failure = std::get_if<ParseFailure>(&result)) {
      art.parse_error = *failure;
    } else {
      parsed = std::get<std::vector<DeviceCommand>>(std::move(result));
    }

    for (const auto& cmd : parsed) {
      CommandEntry entry;
      entry.parsed = cmd;

      t0 = Clock::now();
      entry.validation = validate(cmd, vocab_);
      timer.add("validate", t0);
      all_clean = all_clean && entry.validation.clean();

      t0 = Clock::now();
      entry.repair = repair(cmd, entry.validation, history_, vocab_);
      timer.add("repair", t0);

      if (entry.repair.status != RepairStatus::Irreparable) {
        t0 = Clock::now();
        entry.execution = registry_.execute(entry.repair.command);
        timer.add("execute", t0);

        const auto status = entry.execution->status;
        if (status != ExecutionStatus::Rejected) {
          t0 = Clock::now();
          HistoryRecord rec;
          rec.action = *entry.repair.command.action;
          rec.device = *entry.repair.command.device;
          rec.index = *entry.repair.command.index;
          rec.executed_at = utc_now();
          rec.outcome = status == ExecutionStatus::Executed ? ExecutionOutcome::Success : ExecutionOutcome::Failure;
          rec.sample_id = sample.sample_id;
          try {
            history_.append(std::move(rec));
          } catch (const std::exception& e) {
            art.logging_degraded = true;
            art.logging_error = e.what();
          }
          timer.add("log", t0);
        }
        const bool ok = status == ExecutionStatus::Executed;
        any_executed = any_executed || ok;
        all_executed = all_executed && ok;
      } else {
        all_executed = false;
      }
      art.commands.push_back(std::move(entry));
    }

    if (art.commands.empty()) {
      art.terminal_status = TerminalStatus::NoCommand;
    } else if (all_executed) {
      art.terminal_status = TerminalStatus::Executed;
    } else if (any_executed) {
      art.terminal_status = TerminalStatus::PartiallyExecuted;
    } else {
      art.terminal_status = TerminalStatus::RejectedAll;
    }
  }

  art.no_repair_correct =
      art.inference.succeeded && !art.parse_error && all_clean && parsed == sample.expected_commands;
  art.timings = timer.ordered();
  return art;
}

}  // namespace voxroute
