// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <utility>

#include "voxroute/clock.hpp"

namespace voxroute {

inline constexpr double kLatencyUnreachable = std::numeric_limits<double>::infinity();

// One snapshot of the three quantities the router compares against its
// thresholds. A failed latency probe is +inf with probe_failed set; failed
// cpu/temperature readers report 0 with the matching degraded flag.
struct SystemMetrics {
  double cpu_pct = 0.0;
  double temp_c = 0.0;
  double latency_ms = 0.0;
  Timestamp sampled_at{};
  bool probe_failed = false;
  bool cpu_degraded = false;
  bool temp_degraded = false;

  bool operator==(const SystemMetrics&) const = default;
};

// A reading source. std::nullopt means the reader failed.
using MetricReader = std::function<std::optional<double>()>;

struct MetricProviders {
  MetricReader cpu;
  MetricReader temp;
  MetricReader latency;
};

// Reads each provider once. Never throws on provider failure: the affected
// field falls back to its sentinel and is flagged. Out-of-range cpu values are
// clamped into [0, 100] and non-finite temperatures count as failures.
SystemMetrics sample_system(const MetricProviders& providers);

// Sliding-window mean over timed probe round trips. A failed measurement
// enters the window as +inf, so the mean stays unreachable until it ages out.
// Thread-safe: probe() may be called from a background cadence while other
// threads read last_mean().
class LatencyProbe {
 public:
  LatencyProbe(std::size_t window, MetricReader measure);

  double probe();
  std::optional<double> last_mean() const;
  std::deque<double> window_contents() const;
  std::size_t window() const { return window_; }

 private:
  std::size_t window_;
  MetricReader measure_;
  mutable std::mutex mu_;
  std::deque<double> samples_;
};

// Times one HEAD request against `endpoint_url`. Any HTTP response counts as
// a successful round trip; connection failure or timeout yields nullopt.
std::optional<double> measure_http_round_trip(const std::string& endpoint_url,
                                              std::chrono::milliseconds timeout);

// Convenience wrapper matching the one-shot probe contract: `window` probes
// against the endpoint, mean of the results.
double probe_latency(const std::string& endpoint_url, std::chrono::milliseconds timeout,
                     std::size_t window);

// Host readers backed by /proc/stat and /sys/class/thermal.
MetricReader make_proc_cpu_reader();
MetricReader make_thermal_zone_reader(std::string sysfs_root = "/sys/class/thermal");

struct BalancerConfig {
  bool enabled = true;
  double probability = 0.5;
  std::uint64_t seed = 0;
  // Half-open target ranges (low, high] for the pushed values.
  std::pair<double, double> cpu_range{80.0, 100.0};
  std::pair<double, double> temp_range{50.0, 70.0};

  // Throws std::invalid_argument when probability is outside [0, 1] or a
  // range is empty.
  void check() const;
};

struct PerturbationRecord {
  bool fired = false;
  SystemMetrics original;
  SystemMetrics perturbed;

  bool operator==(const PerturbationRecord&) const = default;
};

// Seeded Bernoulli perturbation that pushes cpu and temperature past the
// router's offline thresholds. Latency is never touched. Every call consumes
// exactly three engine outputs so runs replay identically regardless of
// which calls fired.
class MetricBalancer {
 public:
  explicit MetricBalancer(BalancerConfig cfg);

  PerturbationRecord perturb(const SystemMetrics& metrics);

  const BalancerConfig& config() const { return cfg_; }

 private:
  double next_unit();

  BalancerConfig cfg_;
  std::mt19937_64 engine_;
};

}  // namespace voxroute
