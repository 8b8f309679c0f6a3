// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "voxroute/history.hpp"

namespace voxroute {

// Supported actions and device types. Defaults mirror a small desk testbed:
// two lights and one speaker, each switchable on and off.
struct CommandVocabulary {
  std::vector<std::string> actions{"turn_on", "turn_off"};
  std::map<std::string, int> devices{{"light", 2}, {"speaker", 1}};

  bool has_action(std::string_view a) const;
  bool has_device(std::string_view d) const;
  std::optional<int> instance_count(std::string_view d) const;

  // Throws std::invalid_argument for counts < 1, non snake-case identifiers,
  // duplicate actions or an empty action list.
  void check() const;

  bool operator==(const CommandVocabulary&) const = default;
};

// A possibly incomplete (action, device, index) triple as produced by a model.
struct DeviceCommand {
  std::optional<std::string> action;
  std::optional<std::string> device;
  std::optional<int> index;

  bool complete() const { return action && device && index; }
  bool operator==(const DeviceCommand&) const = default;
};

enum class ValidationLayer { Action, Device, Index };
enum class FailureReason { Missing, Unsupported, OutOfRange };

std::string_view to_string(ValidationLayer layer);
std::string_view to_string(FailureReason reason);
ValidationLayer validation_layer_from_string(std::string_view s);
FailureReason failure_reason_from_string(std::string_view s);

struct ValidationFailure {
  ValidationLayer layer;
  FailureReason reason;

  bool operator==(const ValidationFailure&) const = default;
};

struct ValidationReport {
  bool action_ok = false;
  bool device_ok = false;
  bool index_ok = false;
  std::vector<ValidationFailure> failures;

  bool clean() const { return failures.empty(); }
  bool operator==(const ValidationReport&) const = default;
};

enum class RepairStatus { NotNeeded, Repaired, Irreparable };
enum class RepairSource { History, Default };

std::string_view to_string(RepairStatus status);
std::string_view to_string(RepairSource source);
RepairStatus repair_status_from_string(std::string_view s);
RepairSource repair_source_from_string(std::string_view s);

struct AppliedRepair {
  ValidationLayer layer = ValidationLayer::Index;
  std::optional<int> old_value;
  int new_value = 1;
  RepairSource source = RepairSource::Default;

  bool operator==(const AppliedRepair&) const = default;
};

struct RepairOutcome {
  RepairStatus status = RepairStatus::NotNeeded;
  DeviceCommand command;
  std::vector<AppliedRepair> repairs_applied;

  bool operator==(const RepairOutcome&) const = default;
};

struct ParseFailure {
  std::string reason;
  std::string snippet;

  bool operator==(const ParseFailure&) const = default;
};

using ParseResult = std::variant<std::vector<DeviceCommand>, ParseFailure>;

// Finds the first well-formed JSON array of command objects (or a bare
// command object) in free-form model output. Prose and markdown fences around
// it are ignored. Identifiers are lowercased and snake-cased; a digit string
// is accepted as an index. `[]` is a valid "nothing to do" answer.
ParseResult parse_model_output(std::string_view raw);

// Compact JSON array with keys action/device/index, null for absent fields.
std::string commands_to_json(const std::vector<DeviceCommand>& commands);

// Checks the action, device and index layers independently and reports every
// failure. An index on an unknown device type cannot be bounds-checked and is
// accepted if it is >= 1.
ValidationReport validate(const DeviceCommand& cmd, const CommandVocabulary& vocab);

// Only a missing index is repaired: from the most frequent successful
// (device, action) index in history, else index 1. Anything else that fails
// validation is Irreparable. Action and device are never rewritten.
RepairOutcome repair(const DeviceCommand& cmd, const ValidationReport& report,
                     const HistoryStore& history, const CommandVocabulary& vocab);

// "turn on light 1". Throws std::invalid_argument for incomplete commands.
std::string canonical_text(const DeviceCommand& cmd);

// Lowercase, trim, and map spaces/hyphens to underscores.
std::string to_identifier(std::string_view s);

}  // namespace voxroute
