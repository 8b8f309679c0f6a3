// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "voxroute/command.hpp"
#include "voxroute/metrics.hpp"
#include "voxroute/router.hpp"

namespace voxroute {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MetricsProvider { Real, Fixture };
enum class AsrAdapter { Fixture, External };

struct FixtureMetrics {
  double cpu_pct = 0.0;
  double temp_c = 0.0;
  double latency_ms = 0.0;
};

struct AppConfig {
  BalancerConfig balancer;
  RoutingThresholds thresholds;

  struct Probe {
    std::string endpoint;  // empty: use backends.online.base_url
    int timeout_ms = 1000;
    std::size_t window = 3;
  } probe;

  struct Metrics {
    MetricsProvider provider = MetricsProvider::Real;
    FixtureMetrics fixture;  // used when a sample carries no metrics of its own
    std::string thermal_root = "/sys/class/thermal";
  } metrics;

  struct Backends {
    std::string online_base_url = "https://api.openai.com/v1";
    std::string online_model = "gpt-3.5-turbo";
    std::string online_api_key_env = "OPENAI_API_KEY";
    std::string offline_command;
    std::vector<std::string> offline_args;
    std::string offline_model = "tinyllama-1.1b-chat-v1.0";
    int timeout_ms = 30000;
    bool test_mode = false;
  } backends;

  CommandVocabulary vocab;

  struct History {
    std::optional<std::filesystem::path> path;
  } history;

  struct Asr {
    AsrAdapter adapter = AsrAdapter::Fixture;
    std::vector<std::string> command;
    int timeout_ms = 30000;
  } asr;

  std::string device_driver = "sim";

  // Throws ConfigError describing the first invalid setting.
  void check() const;
};

// Parses a JSON config document. Every key is optional; missing keys keep
// their defaults. When thresholds are given, the balancer's target ranges
// follow them so a fired perturbation always crosses the configured limits.
AppConfig parse_config(const std::string& json_text);
AppConfig load_config(const std::filesystem::path& path);

}  // namespace voxroute
