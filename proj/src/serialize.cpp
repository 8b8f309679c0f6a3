// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxroute/serialize.hpp"

#include <cmath>

namespace voxroute {

namespace {

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> get_opt(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    return std::nullopt;
  }
  return it->get<T>();
}

std::string str(std::string_view s) { return std::string(s); }

}  // namespace

void to_json(json& j, const SystemMetrics& m) {
  j = json{{"cpu_pct", m.cpu_pct},
           {"temp_c", m.temp_c},
           {"latency_ms", std::isfinite(m.latency_ms) ? json(m.latency_ms) : json(nullptr)},
           {"probe_failed", m.probe_failed},
           {"cpu_degraded", m.cpu_degraded},
           {"temp_degraded", m.temp_degraded},
           {"sampled_at", format_rfc3339(m.sampled_at)}};
}

void from_json(const json& j, SystemMetrics& m) {
  m.cpu_pct = j.at("cpu_pct").get<double>();
  m.temp_c = j.at("temp_c").get<double>();
  const auto& lat = j.at("latency_ms");
  m.latency_ms = lat.is_null() ? kLatencyUnreachable : lat.get<double>();
  m.probe_failed = j.value("probe_failed", false);
  m.cpu_degraded = j.value("cpu_degraded", false);
  m.temp_degraded = j.value("temp_degraded", false);
  m.sampled_at = parse_rfc3339(j.at("sampled_at").get<std::string>());
}

void to_json(json& j, const PerturbationRecord& p) {
  j = json{{"fired", p.fired}, {"original", p.original}, {"perturbed", p.perturbed}};
}

void from_json(const json& j, PerturbationRecord& p) {
  p.fired = j.at("fired").get<bool>();
  p.original = j.at("original").get<SystemMetrics>();
  p.perturbed = j.at("perturbed").get<SystemMetrics>();
}

void to_json(json& j, const RoutingDecision& d) {
  json rules = json::array();
  for (auto r : d.fired_rules) {
    rules.push_back(str(to_string(r)));
  }
  j = json{{"mode", str(to_string(d.mode))}, {"fired_rules", rules}, {"metrics_used", d.metrics_used}};
}

void from_json(const json& j, RoutingDecision& d) {
  d.mode = inference_mode_from_string(j.at("mode").get<std::string>());
  d.fired_rules.clear();
  for (const auto& r : j.at("fired_rules")) {
    d.fired_rules.push_back(routing_rule_from_string(r.get<std::string>()));
  }
  d.metrics_used = j.at("metrics_used").get<SystemMetrics>();
}

void to_json(json& j, const InferenceResult& r) {
  j = json{{"backend_id", str(to_string(r.backend_id))},
           {"raw_output", r.raw_output},
           {"latency_ms", r.latency_ms},
           {"model_name", r.model_name},
           {"succeeded", r.succeeded},
           {"failure_reason", opt(r.failure_reason)}};
}

void from_json(const json& j, InferenceResult& r) {
  r.backend_id = backend_id_from_string(j.at("backend_id").get<std::string>());
  r.raw_output = j.at("raw_output").get<std::string>();
  r.latency_ms = j.at("latency_ms").get<double>();
  r.model_name = j.at("model_name").get<std::string>();
  r.succeeded = j.at("succeeded").get<bool>();
  r.failure_reason = get_opt<std::string>(j, "failure_reason");
}

void to_json(json& j, const DeviceCommand& c) {
  j = json{{"action", opt(c.action)}, {"device", opt(c.device)}, {"index", opt(c.index)}};
}

void from_json(const json& j, DeviceCommand& c) {
  c.action = get_opt<std::string>(j, "action");
  c.device = get_opt<std::string>(j, "device");
  c.index = get_opt<int>(j, "index");
}

void to_json(json& j, const ValidationReport& r) {
  json failures = json::array();
  for (const auto& f : r.failures) {
    failures.push_back({{"layer", str(to_string(f.layer))}, {"reason", str(to_string(f.reason))}});
  }
  j = json{{"action_ok", r.action_ok}, {"device_ok", r.device_ok}, {"index_ok", r.index_ok}, {"failures", failures}};
}

void from_json(const json& j, ValidationReport& r) {
  r.action_ok = j.at("action_ok").get<bool>();
  r.device_ok = j.at("device_ok").get<bool>();
  r.index_ok = j.at("index_ok").get<bool>();
  r.failures.clear();
  for (const auto& f : j.at("failures")) {
    r.failures.push_back({validation_layer_from_string(f.at("layer").get<std::string>()),
                          failure_reason_from_string(f.at("reason").get<std::string>())});
  }
}

void to_json(json& j, const RepairOutcome& r) {
  json repairs = json::array();
  for (const auto& a : r.repairs_applied) {
    repairs.push_back({{"layer", str(to_string(a.layer))},
                       {"old_value", opt(a.old_value)},
                       {"new_value", a.new_value},
                       {"source", str(to_string(a.source))}});
  }
  j = json{{"status", str(to_string(r.status))},
           {"command", r.command},
           {"canonical_text", r.command.complete() ? json(canonical_text(r.command)) : json(nullptr)},
           {"repairs_applied", repairs}};
}

void from_json(const json& j, RepairOutcome& r) {
  r.status = repair_status_from_string(j.at("status").get<std::string>());
  r.command = j.at("command").get<DeviceCommand>();
  r.repairs_applied.clear();
  for (const auto& a : j.at("repairs_applied")) {
    AppliedRepair fix;
    fix.layer = validation_layer_from_string(a.at("layer").get<std::string>());
    fix.old_value = get_opt<int>(a, "old_value");
    fix.new_value = a.at("new_value").get<int>();
    fix.source = repair_source_from_string(a.at("source").get<std::string>());
    r.repairs_applied.push_back(fix);
  }
}

void to_json(json& j, const DeviceState& s) {
  j = json{{"power", str(to_string(s.power))}, {"last_changed_at", format_rfc3339(s.last_changed_at)}};
}

void from_json(const json& j, DeviceState& s) {
  s.power = power_state_from_string(j.at("power").get<std::string>());
  s.last_changed_at = parse_rfc3339(j.at("last_changed_at").get<std::string>());
}

void to_json(json& j, const ExecutionResult& r) {
  j = json{{"status", str(to_string(r.status))},
           {"command", r.command},
           {"state_after", opt(r.state_after)},
           {"detail", r.detail}};
}

void from_json(const json& j, ExecutionResult& r) {
  r.status = execution_status_from_string(j.at("status").get<std::string>());
  r.command = j.at("command").get<DeviceCommand>();
  r.state_after = get_opt<DeviceState>(j, "state_after");
  r.detail = j.at("detail").get<std::string>();
}

void to_json(json& j, const ParseFailure& f) { j = json{{"reason", f.reason}, {"snippet", f.snippet}}; }

void from_json(const json& j, ParseFailure& f) {
  f.reason = j.at("reason").get<std::string>();
  f.snippet = j.at("snippet").get<std::string>();
}

void to_json(json& j, const SampleArtifact& a) {
  json commands = json::array();
  for (const auto& c : a.commands) {
    commands.push_back({{"parsed", c.parsed},
                        {"validation", c.validation},
                        {"repair", c.repair},
                        {"execution", opt(c.execution)}});
  }
  json timings = json::array();
  for (const auto& t : a.timings) {
    timings.push_back({{"stage", t.stage}, {"ms", t.ms}});
  }
  j = json{{"sample_id", a.sample_id},
           {"sample_index", a.sample_index},
           {"category", a.category ? json(str(to_string(*a.category))) : json(nullptr)},
           {"transcript",
            {{"reference", opt(a.transcript.reference)},
             {"hypothesis", a.transcript.hypothesis},
             {"asr_correct", a.transcript.asr_correct},
             {"source", str(to_string(a.transcript.source))},
             {"degraded", a.transcript.degraded}}},
           {"metrics", {{"raw", a.metrics.raw}, {"perturbation", a.metrics.perturbation}}},
           {"decision", a.decision},
           {"inference", a.inference},
           {"parse_error", opt(a.parse_error)},
           {"commands", commands},
           {"expected_commands", a.expected_commands},
           {"no_repair_correct", a.no_repair_correct},
           {"terminal_status", str(to_string(a.terminal_status))},
           {"logging_degraded", a.logging_degraded},
           {"logging_error", opt(a.logging_error)},
           {"timings", timings}};
}

void from_json(const json& j, SampleArtifact& a) {
  a.sample_id = j.at("sample_id").get<std::string>();
  a.sample_index = j.at("sample_index").get<std::size_t>();
  if (auto c = get_opt<std::string>(j, "category")) {
    a.category = sample_category_from_string(*c);
  } else {
    a.category.reset();
  }
  const auto& t = j.at("transcript");
  a.transcript.reference = get_opt<std::string>(t, "reference");
  a.transcript.hypothesis = t.at("hypothesis").get<std::string>();
  a.transcript.asr_correct = t.at("asr_correct").get<bool>();
  a.transcript.source = t.at("source").get<std::string>() == "fixture" ? TranscriptSource::Fixture
                                                                      : TranscriptSource::ExternalProcess;
  a.transcript.degraded = t.at("degraded").get<bool>();
  a.metrics.raw = j.at("metrics").at("raw").get<SystemMetrics>();
  a.metrics.perturbation = j.at("metrics").at("perturbation").get<PerturbationRecord>();
  a.decision = j.at("decision").get<RoutingDecision>();
  a.inference = j.at("inference").get<InferenceResult>();
  a.parse_error = get_opt<ParseFailure>(j, "parse_error");
  a.commands.clear();
  for (const auto& c : j.at("commands")) {
    CommandEntry e;
    e.parsed = c.at("parsed").get<DeviceCommand>();
    e.validation = c.at("validation").get<ValidationReport>();
    e.repair = c.at("repair").get<RepairOutcome>();
    e.execution = get_opt<ExecutionResult>(c, "execution");
    a.commands.push_back(std::move(e));
  }
  a.expected_commands = j.at("expected_commands").get<std::vector<DeviceCommand>>();
  a.no_repair_correct = j.at("no_repair_correct").get<bool>();
  a.terminal_status = terminal_status_from_string(j.at("terminal_status").get<std::string>());
  a.logging_degraded = j.at("logging_degraded").get<bool>();
  a.logging_error = get_opt<std::string>(j, "logging_error");
  a.timings.clear();
  for (const auto& t2 : j.at("timings")) {
    a.timings.push_back({t2.at("stage").get<std::string>(), t2.at("ms").get<double>()});
  }
}

}  // namespace voxroute
