// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "voxroute/clock.hpp"
#include "voxroute/command.hpp"

namespace voxroute {

enum class PowerState { Off, On };

std::string_view to_string(PowerState p);
PowerState power_state_from_string(std::string_view s);

struct DeviceState {
  PowerState power = PowerState::Off;
  Timestamp last_changed_at{};

  bool operator==(const DeviceState&) const = default;
};

// Protocol boundary for a single device instance. A USB/GPIO backend would
// implement this; set_power may throw to signal a hardware fault.
class DeviceDriver {
 public:
  virtual ~DeviceDriver() = default;
  virtual void set_power(PowerState power) = 0;
  virtual DeviceState state() const = 0;
};

// In-process on/off switch. Re-asserting the current state is a no-op and
// leaves last_changed_at alone.
class SimulatedSwitch final : public DeviceDriver {
 public:
  void set_power(PowerState power) override;
  DeviceState state() const override { return state_; }

 private:
  DeviceState state_;
};

enum class ExecutionStatus { Executed, Rejected, DriverError };

std::string_view to_string(ExecutionStatus s);
ExecutionStatus execution_status_from_string(std::string_view s);

struct ExecutionResult {
  ExecutionStatus status = ExecutionStatus::Rejected;
  DeviceCommand command;
  std::optional<DeviceState> state_after;
  std::string detail;

  bool operator==(const ExecutionResult&) const = default;
};

class UnknownDeviceError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// One driver per (device type, 1-based index), expanded from the vocabulary.
// Mutated only from the pipeline thread.
class DeviceRegistry {
 public:
  using Key = std::pair<std::string, int>;

  // Simulated switches for every instance in the vocabulary.
  explicit DeviceRegistry(const CommandVocabulary& vocab);

  // Swap in a different driver for an existing entry (hardware, fault
  // injection). Throws UnknownDeviceError when the entry does not exist.
  void replace_driver(const std::string& device, int index, std::unique_ptr<DeviceDriver> driver);

  // Looks up (device, index) and applies turn_on/turn_off. Incomplete
  // commands, unregistered instances and unknown actions are Rejected with no
  // side effects; a throwing driver yields DriverError.
  ExecutionResult execute(const DeviceCommand& cmd);

  // Throws UnknownDeviceError for unregistered entries.
  DeviceState device_state(const std::string& device, int index) const;

  std::size_t size() const { return drivers_.size(); }
  bool contains(const std::string& device, int index) const;

 private:
  std::map<Key, std::unique_ptr<DeviceDriver>> drivers_;
};

}  // namespace voxroute
