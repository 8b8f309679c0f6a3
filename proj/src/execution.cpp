// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxroute/execution.hpp"

namespace voxroute {

std::string_view to_string(PowerState p) { return p == PowerState::On ? "on" : "off"; }

PowerState power_state_from_string(std::string_view s) {
  if (s == "on") return PowerState::On;
  if (s == "off") return PowerState::Off;
  throw std::invalid_argument("unknown power state: " + std::string(s));
}

std::string_view to_string(ExecutionStatus s) {
  switch (s) {
    case ExecutionStatus::Executed:
      return "executed";
    case ExecutionStatus::Rejected:
      return "rejected";
    case ExecutionStatus::DriverError:
      return "driver_error";
  }
  return "?";
}

ExecutionStatus execution_status_from_string(std::string_view s) {
  if (s == "executed") return ExecutionStatus::Executed;
  if (s == "rejected") return ExecutionStatus::Rejected;
  if (s == "driver_error") return ExecutionStatus::DriverError;
  throw std::invalid_argument("unknown execution status: " + std::string(s));
}

void SimulatedSwitch::set_power(PowerState power) {
  if (state_.power != power) {
    state_.power = power;
    state_.last_changed_at = utc_now();
  }
}

DeviceRegistry::DeviceRegistry(const CommandVocabulary& vocab) {
  for (const auto& [device, count] : vocab.devices) {
    for (int i = 1; i <= count; ++i) {
      drivers_.emplace(Key{device, i}, std::make_unique<SimulatedSwitch>());
    }
  }
}

void DeviceRegistry::replace_driver(const std::string& device, int index,
                                    std::unique_ptr<DeviceDriver> driver) {
  auto it = drivers_.find(Key{device, index});
  if (it == drivers_.end()) {
    throw UnknownDeviceError("no such device: " + device + " " + std::to_string(index));
  }
  it->second = std::move(driver);
}

bool DeviceRegistry::contains(const std::string& device, int index) const {
  return drivers_.count(Key{device, index}) > 0;
}

ExecutionResult DeviceRegistry::execute(const DeviceCommand& cmd) {
  ExecutionResult result;
  result.command = cmd;
  if (!cmd.complete()) {
    result.status = ExecutionStatus::Rejected;
    result.detail = "incomplete command";
    return result;
  }

  PowerState target;
  if (*cmd.action == "turn_on") {
    target = PowerState::On;
  } else if (*cmd.action == "turn_off") {
    target = PowerState::Off;
  } else {
    result.status = ExecutionStatus::Rejected;
    result.detail = "no driver semantics for action " + *cmd.action;
    return result;
  }

  auto it = drivers_.find(Key{*cmd.device, *cmd.index});
  if (it == drivers_.end()) {
    result.status = ExecutionStatus::Rejected;
    result.detail = "device not registered: " + *cmd.device + " " + std::to_string(*cmd.index);
    return result;
  }

  try {
    it->second->set_power(target);
  } catch (const std::exception& e) {
    result.status = ExecutionStatus::DriverError;
    result.detail = e.what();
    return result;
  }
  result.status = ExecutionStatus::Executed;
  result.state_after = it->second->state();
  result.detail = canonical_text(cmd);
  return result;
}

DeviceState DeviceRegistry::device_state(const std::string& device, int index) const {
  auto it = drivers_.find(Key{device, index});
  if (it == drivers_.end()) {
    throw UnknownDeviceError("no such device: " + device + " " + std::to_string(index));
  }
  return it->second->state();
}

}  // namespace voxroute
