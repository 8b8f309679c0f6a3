// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>
#include <vector>

#include "voxroute/metrics.hpp"

namespace voxroute {

enum class InferenceMode { Online, Offline };
enum class RoutingRule { CpuAndTempHigh, LatencyHigh };

std::string_view to_string(InferenceMode mode);
std::string_view to_string(RoutingRule rule);
InferenceMode inference_mode_from_string(std::string_view s);
RoutingRule routing_rule_from_string(std::string_view s);

struct RoutingThresholds {
  double cpu_pct = 80.0;
  double temp_c = 50.0;
  double latency_ms = 150.0;

  // Throws std::invalid_argument unless all three are finite and positive.
  void check() const;

  bool operator==(const RoutingThresholds&) const = default;
};

struct RoutingDecision {
  InferenceMode mode = InferenceMode::Online;
  std::vector<RoutingRule> fired_rules;  // in enum order, no duplicates
  SystemMetrics metrics_used;

  bool operator==(const RoutingDecision&) const = default;
};

// Offline iff (cpu > thr.cpu AND temp > thr.temp) OR latency > thr.latency.
// Comparisons are strict, so readings exactly at a threshold stay Online.
// An unreachable (+inf) latency always fires LatencyHigh.
RoutingDecision decide(const SystemMetrics& metrics, const RoutingThresholds& thresholds = {});

}  // namespace voxroute
