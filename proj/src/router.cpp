// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxroute/router.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace voxroute {

std::string_view to_string(InferenceMode mode) {
  return mode == InferenceMode::Online ? "online" : "offline";
}

std::string_view to_string(RoutingRule rule) {
  return rule == RoutingRule::CpuAndTempHigh ? "cpu_and_temp_high" : "latency_high";
}

InferenceMode inference_mode_from_string(std::string_view s) {
  if (s == "online") return InferenceMode::Online;
  if (s == "offline") return InferenceMode::Offline;
  throw std::invalid_argument("unknown inference mode: " + std::string(s));
}

RoutingRule routing_rule_from_string(std::string_view s) {
  if (s == "cpu_and_temp_high") return RoutingRule::CpuAndTempHigh;
  if (s == "latency_high") return RoutingRule::LatencyHigh;
  throw std::invalid_argument("unknown routing rule: " + std::string(s));
}

void RoutingThresholds::check() const {
  for (double v : {cpu_pct, temp_c, latency_ms}) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw std::invalid_argument("routing thresholds must be finite and positive");
    }
  }
}

RoutingDecision decide(const SystemMetrics& metrics, const RoutingThresholds& thresholds) {
  RoutingDecision d;
  d.metrics_used = metrics;
  if (metrics.cpu_pct > thresholds.cpu_pct && metrics.temp_c > thresholds.temp_c) {
    d.fired_rules.push_back(RoutingRule::CpuAndTempHigh);
  }
  if (metrics.latency_ms > thresholds.latency_ms) {
    d.fired_rules.push_back(RoutingRule::LatencyHigh);
  }
  d.mode = d.fired_rules.empty() ? InferenceMode::Online : InferenceMode::Offline;
  return d;
}

}  // namespace voxroute
