// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxroute/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace voxroute {

using json = nlohmann::json;

namespace {

// Rejects keys outside `allowed` so a typo does not silently fall back to a
// default.
void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) {
    throw ConfigError(where + " must be an object");
  }
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) {
      known = known || key == a;
    }
    if (!known) {
      throw ConfigError("unknown config key: " + (where.empty() ? key : where + "." + key));
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, const std::string& where, T& out) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    return;
  }
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key has the wrong type: " + where + "." + key);
  }
}

std::vector<std::string> read_command(const json& value, const std::string& where) {
  if (value.is_string()) {
    return {value.get<std::string>()};
  }
  if (value.is_array() && std::all_of(value.begin(), value.end(), [](const json& v) { return v.is_string(); })) {
    return value.get<std::vector<std::string>>();
  }
  throw ConfigError(where + " must be a string or an array of strings");
}

}  // namespace

void AppConfig::check() const {
  try {
    balancer.check();
    thresholds.check();
    vocab.check();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (probe.window < 1) {
    throw ConfigError("probe.window must be >= 1");
  }
  if (probe.timeout_ms <= 0 || backends.timeout_ms <= 0 || asr.timeout_ms <= 0) {
    throw ConfigError("timeouts must be positive");
  }
  if (metrics.fixture.cpu_pct < 0 || metrics.fixture.cpu_pct > 100 || metrics.fixture.latency_ms < 0) {
    throw ConfigError("metrics.fixture values out of range");
  }
  if (asr.adapter == AsrAdapter::External && asr.command.empty()) {
    throw ConfigError("asr.command is required for the external adapter");
  }
  if (device_driver != "sim") {
    throw ConfigError("devices.driver '" + device_driver + "' is not supported (only 'sim')");
  }
}

AppConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(root, "", {"balancer", "probe", "metrics", "thresholds", "backends", "vocab", "history", "asr",
                        "devices"});

  AppConfig cfg;
  bool thresholds_given = false;

  if (auto it = root.find("balancer"); it != root.end()) {
    check_keys(*it, "balancer", {"enabled", "probability", "seed"});
    read(*it, "enabled", "balancer", cfg.balancer.enabled);
    read(*it, "probability", "balancer", cfg.balancer.probability);
    read(*it, "seed", "balancer", cfg.balancer.seed);
  }
  if (auto it = root.find("thresholds"); it != root.end()) {
    check_keys(*it, "thresholds", {"cpu_pct", "temp_c", "latency_ms"});
    read(*it, "cpu_pct", "thresholds", cfg.thresholds.cpu_pct);
    read(*it, "temp_c", "thresholds", cfg.thresholds.temp_c);
    read(*it, "latency_ms", "thresholds", cfg.thresholds.latency_ms);
    thresholds_given = true;
  }
  if (auto it = root.find("probe"); it != root.end()) {
    check_keys(*it, "probe", {"endpoint", "timeout_ms", "window"});
    read(*it, "endpoint", "probe", cfg.probe.endpoint);
    read(*it, "timeout_ms", "probe", cfg.probe.timeout_ms);
    read(*it, "window", "probe", cfg.probe.window);
  }
  if (auto it = root.find("metrics"); it != root.end()) {
    check_keys(*it, "metrics", {"provider", "fixture", "thermal_root"});
    std::string provider = "real";
    read(*it, "provider", "metrics", provider);
    if (provider == "real") {
      cfg.metrics.provider = MetricsProvider::Real;
    } else if (provider == "fixture") {
      cfg.metrics.provider = MetricsProvider::Fixture;
    } else {
      throw ConfigError("metrics.provider must be 'real' or 'fixture'");
    }
    if (auto f = it->find("fixture"); f != it->end()) {
      check_keys(*f, "metrics.fixture", {"cpu_pct", "temp_c", "latency_ms"});
      read(*f, "cpu_pct", "metrics.fixture", cfg.metrics.fixture.cpu_pct);
      read(*f, "temp_c", "metrics.fixture", cfg.metrics.fixture.temp_c);
      read(*f, "latency_ms", "metrics.fixture", cfg.metrics.fixture.latency_ms);
    }
    read(*it, "thermal_root", "metrics", cfg.metrics.thermal_root);
  }
  if (auto it = root.find("backends"); it != root.end()) {
    check_keys(*it, "backends", {"online", "offline", "timeout_ms", "test_mode"});
    if (auto on = it->find("online"); on != it->end()) {
      check_keys(*on, "backends.online", {"base_url", "model", "api_key_env"});
      read(*on, "base_url", "backends.online", cfg.backends.online_base_url);
      read(*on, "model", "backends.online", cfg.backends.online_model);
      read(*on, "api_key_env", "backends.online", cfg.backends.online_api_key_env);
    }
    if (auto off = it->find("offline"); off != it->end()) {
      check_keys(*off, "backends.offline", {"command", "args", "model"});
      read(*off, "command", "backends.offline", cfg.backends.offline_command);
      read(*off, "args", "backends.offline", cfg.backends.offline_args);
      read(*off, "model", "backends.offline", cfg.backends.offline_model);
    }
    read(*it, "timeout_ms", "backends", cfg.backends.timeout_ms);
    read(*it, "test_mode", "backends", cfg.backends.test_mode);
  }
  if (auto it = root.find("vocab"); it != root.end()) {
    check_keys(*it, "vocab", {"actions", "devices"});
    read(*it, "actions", "vocab", cfg.vocab.actions);
    read(*it, "devices", "vocab", cfg.vocab.devices);
  }
  if (auto it = root.find("history"); it != root.end()) {
    check_keys(*it, "history", {"path"});
    if (auto p = it->find("path"); p != it->end() && !p->is_null()) {
      if (!p->is_string()) {
        throw ConfigError("history.path must be a string");
      }
      cfg.history.path = p->get<std::string>();
    }
  }
  if (auto it = root.find("asr"); it != root.end()) {
    check_keys(*it, "asr", {"adapter", "command", "timeout_ms"});
    std::string adapter = "fixture";
    read(*it, "adapter", "asr", adapter);
    if (adapter == "fixture") {
      cfg.asr.adapter = AsrAdapter::Fixture;
    } else if (adapter == "external") {
      cfg.asr.adapter = AsrAdapter::External;
    } else {
      throw ConfigError("asr.adapter must be 'fixture' or 'external'");
    }
    if (auto c = it->find("command"); c != it->end()) {
      cfg.asr.command = read_command(*c, "asr.command");
    }
    read(*it, "timeout_ms", "asr", cfg.asr.timeout_ms);
  }
  if (auto it = root.find("devices"); it != root.end()) {
    check_keys(*it, "devices", {"driver"});
    read(*it, "driver", "devices", cfg.device_driver);
  }

  if (thresholds_given) {
    if (cfg.balancer.enabled && cfg.thresholds.cpu_pct >= 100.0) {
      throw ConfigError("thresholds.cpu_pct must be below 100 for the balancer to cross it");
    }
    if (cfg.thresholds.cpu_pct < 100.0) {
      cfg.balancer.cpu_range = {cfg.thresholds.cpu_pct, 100.0};
    }
    cfg.balancer.temp_range = {cfg.thresholds.temp_c, cfg.thresholds.temp_c + 20.0};
  }
  cfg.check();
  return cfg;
}

AppConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read config file: " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace voxroute
