// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxroute/command.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include "json.hpp"

namespace voxroute {

using json = nlohmann::json;

namespace {

bool is_snake_case(std::string_view s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s.front()))) {
    return false;
  }
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::islower(c) || std::isdigit(c) || c == '_';
  });
}

// Index of the bracket closing the one at `open`, honoring JSON strings.
std::optional<std::size_t> matching_close(std::string_view s, std::size_t open) {
  std::vector<char> stack;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    switch (c) {
      case '"':
        in_string = true;
        break;
      case '[':
      case '{':
        stack.push_back(c);
        break;
      case ']':
      case '}': {
        const char want = c == ']' ? '[' : '{';
        if (stack.empty() || stack.back() != want) {
          return std::nullopt;
        }
        stack.pop_back();
        if (stack.empty()) {
          return i;
        }
        break;
      }
      default:
        break;
    }
  }
  return std::nullopt;
}

std::optional<std::string> identifier_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    return std::nullopt;
  }
  auto id = to_identifier(it->get<std::string>());
  if (id.empty()) {
    return std::nullopt;
  }
  return id;
}

std::optional<int> index_field(const json& obj) {
  auto it = obj.find("index");
  if (it == obj.end()) {
    return std::nullopt;
  }
  if (it->is_number_integer()) {
    return it->get<int>();
  }
  if (it->is_number_float()) {
    const double v = it->get<double>();
    if (std::isfinite(v) && std::floor(v) == v && std::abs(v) < 1e9) {
      return static_cast<int>(v);
    }
    return std::nullopt;
  }
  if (it->is_string()) {
    std::string s = it->get<std::string>();
    s.erase(0, s.find_first_not_of(" \t"));
    s.erase(s.find_last_not_of(" \t") + 1);
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (!s.empty() && ec == std::errc{} && ptr == s.data() + s.size()) {
      return v;
    }
  }
  return std::nullopt;
}

json lowercase_keys(const json& obj) {
  json out = json::object();
  for (const auto& [k, v] : obj.items()) {
    std::string key = k;
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    out[key] = v;
  }
  return out;
}

bool looks_like_command(const json& obj) {
  const json lower = lowercase_keys(obj);
  return lower.contains("action") || lower.contains("device") || lower.contains("index");
}

std::string clip(std::string_view s) {
  constexpr std::size_t kMax = 200;
  return std::string(s.substr(0, kMax));
}

}  // namespace

bool CommandVocabulary::has_action(std::string_view a) const {
  return std::find(actions.begin(), actions.end(), a) != actions.end();
}

bool CommandVocabulary::has_device(std::string_view d) const {
  return devices.find(std::string(d)) != devices.end();
}

std::optional<int> CommandVocabulary::instance_count(std::string_view d) const {
  auto it = devices.find(std::string(d));
  if (it == devices.end()) {
    return std::nullopt;
  }
  return it->second;
}

void CommandVocabulary::check() const {
  if (actions.empty()) {
    throw std::invalid_argument("vocabulary needs at least one action");
  }
  std::set<std::string> seen;
  for (const auto& a : actions) {
    if (!is_snake_case(a)) {
      throw std::invalid_argument("action identifier is not snake_case: " + a);
    }
    if (!seen.insert(a).second) {
      throw std::invalid_argument("duplicate action: " + a);
    }
  }
  for (const auto& [d, n] : devices) {
    if (!is_snake_case(d)) {
      throw std::invalid_argument("device identifier is not snake_case: " + d);
    }
    if (n < 1) {
      throw std::invalid_argument("device count must be >= 1: " + d);
    }
  }
}

std::string_view to_string(ValidationLayer layer) {
  switch (layer) {
    case ValidationLayer::Action:
      return "action";
    case ValidationLayer::Device:
      return "device";
    case ValidationLayer::Index:
      return "index";
  }
  return "?";
}

std::string_view to_string(FailureReason reason) {
  switch (reason) {
    case FailureReason::Missing:
      return "missing";
    case FailureReason::Unsupported:
      return "unsupported";
    case FailureReason::OutOfRange:
      return "out_of_range";
  }
  return "?";
}

ValidationLayer validation_layer_from_string(std::string_view s) {
  if (s == "action") return ValidationLayer::Action;
  if (s == "device") return ValidationLayer::Device;
  if (s == "index") return ValidationLayer::Index;
  throw std::invalid_argument("unknown validation layer: " + std::string(s));
}

FailureReason failure_reason_from_string(std::string_view s) {
  if (s == "missing") return FailureReason::Missing;
  if (s == "unsupported") return FailureReason::Unsupported;
  if (s == "out_of_range") return FailureReason::OutOfRange;
  throw std::invalid_argument("unknown failure reason: " + std::string(s));
}

std::string_view to_string(RepairStatus status) {
  switch (status) {
    case RepairStatus::NotNeeded:
      return "not_needed";
    case RepairStatus::Repaired:
      return "repaired";
    case RepairStatus::Irreparable:
      return "irreparable";
  }
  return "?";
}

std::string_view to_string(RepairSource source) {
  return source == RepairSource::History ? "history" : "default";
}

RepairStatus repair_status_from_string(std::string_view s) {
  if (s == "not_needed") return RepairStatus::NotNeeded;
  if (s == "repaired") return RepairStatus::Repaired;
  if (s == "irreparable") return RepairStatus::Irreparable;
  throw std::invalid_argument("unknown repair status: " + std::string(s));
}

RepairSource repair_source_from_string(std::string_view s) {
  if (s == "history") return RepairSource::History;
  if (s == "default") return RepairSource::Default;
  throw std::invalid_argument("unknown repair source: " + std::string(s));
}

std::string to_identifier(std::string_view s) {
  std::string out;
  bool pending_sep = false;
  for (unsigned char c : s) {
    if (std::isspace(c) || c == '-' || c == '_') {
      pending_sep = !out.empty();
      continue;
    }
    if (pending_sep) {
      out.push_back('_');
      pending_sep = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

ParseResult parse_model_output(std::string_view raw) {
  for (std::size_t pos = 0; pos < raw.size(); ++pos) {
    if (raw[pos] != '[' && raw[pos] != '{') {
      continue;
    }
    const auto close = matching_close(raw, pos);
    if (!close) {
      continue;
    }
    const std::string_view candidate = raw.substr(pos, *close - pos + 1);
    json value = json::parse(candidate, nullptr, /*allow_exceptions=*/false);
    if (value.is_discarded()) {
      continue;
    }

    json items;
    if (value.is_array()) {
      if (!std::all_of(value.begin(), value.end(), [](const json& e) { return e.is_object(); })) {
        continue;
      }
      items = std::move(value);
    } else if (value.is_object() && looks_like_command(value)) {
      items = json::array({std::move(value)});
    } else {
      // e.g. {"commands": [...]}; the scan will reach the inner array next.
      continue;
    }

    std::vector<DeviceCommand> commands;
    for (const auto& item : items) {
      const json obj = lowercase_keys(item);
      DeviceCommand cmd;
      cmd.action = identifier_field(obj, "action");
      cmd.device = identifier_field(obj, "device");
      cmd.index = index_field(obj);
      if (!cmd.action && !cmd.device) {
        return ParseFailure{"command object lacks both action and device", clip(item.dump())};
      }
      commands.push_back(std::move(cmd));
    }
    return commands;
  }
  return ParseFailure{"no JSON command array found", clip(raw)};
}

std::string commands_to_json(const std::vector<DeviceCommand>& commands) {
  json arr = json::array();
  for (const auto& c : commands) {
    json obj;
    obj["action"] = c.action ? json(*c.action) : json(nullptr);
    obj["device"] = c.device ? json(*c.device) : json(nullptr);
    obj["index"] = c.index ? json(*c.index) : json(nullptr);
    arr.push_back(std::move(obj));
  }
  return arr.dump();
}

ValidationReport validate(const DeviceCommand& cmd, const CommandVocabulary& vocab) {
  ValidationReport report;

  if (!cmd.action || cmd.action->empty()) {
    report.failures.push_back({ValidationLayer::Action, FailureReason::Missing});
  } else if (!vocab.has_action(*cmd.action)) {
    report.failures.push_back({ValidationLayer::Action, FailureReason::Unsupported});
  } else {
    report.action_ok = true;
  }

  std::optional<int> count;
  if (!cmd.device || cmd.device->empty()) {
    report.failures.push_back({ValidationLayer::Device, FailureReason::Missing});
  } else if (count = vocab.instance_count(*cmd.device); !count) {
    report.failures.push_back({ValidationLayer::Device, FailureReason::Unsupported});
  } else {
    report.device_ok = true;
  }

  if (!cmd.index) {
    report.failures.push_back({ValidationLayer::Index, FailureReason::Missing});
  } else if (*cmd.index < 1 || (count && *cmd.index > *count)) {
    report.failures.push_back({ValidationLayer::Index, FailureReason::OutOfRange});
  } else {
    report.index_ok = true;
  }
  return report;
}

RepairOutcome repair(const DeviceCommand& cmd, const ValidationReport& report,
                     const HistoryStore& history, const CommandVocabulary& vocab) {
  RepairOutcome out;
  out.command = cmd;
  if (report.clean()) {
    out.status = RepairStatus::NotNeeded;
    return out;
  }
  const bool only_index_missing =
      report.failures.size() == 1 &&
      report.failures.front() == ValidationFailure{ValidationLayer::Index, FailureReason::Missing};
  if (!only_index_missing || !cmd.action || !cmd.device) {
    out.status = RepairStatus::Irreparable;
    return out;
  }

  AppliedRepair fix;
  fix.layer = ValidationLayer::Index;
  fix.old_value = cmd.index;
  const auto count = vocab.instance_count(*cmd.device).value_or(0);
  // A history index that no longer fits the vocabulary falls back to 1.
  if (auto hist = history.most_frequent_index(*cmd.device, *cmd.action); hist && *hist <= count) {
    fix.new_value = *hist;
    fix.source = RepairSource::History;
  } else {
    fix.new_value = 1;
    fix.source = RepairSource::Default;
  }

  DeviceCommand fixed = cmd;
  fixed.index = fix.new_value;
  if (!validate(fixed, vocab).clean()) {
    out.status = RepairStatus::Irreparable;
    return out;
  }
  out.status = RepairStatus::Repaired;
  out.command = std::move(fixed);
  out.repairs_applied.push_back(fix);
  return out;
}

std::string canonical_text(const DeviceCommand& cmd) {
  if (!cmd.complete()) {
    throw std::invalid_argument("canonical_text needs a complete command");
  }
  std::string action = *cmd.action;
  std::replace(action.begin(), action.end(), '_', ' ');
  return action + " " + *cmd.device + " " + std::to_string(*cmd.index);
}

}  // namespace voxroute
