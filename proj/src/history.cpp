// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxroute/history.hpp"

#include <fstream>
#include <map>

#include "json.hpp"

namespace voxroute {

using json = nlohmann::json;

std::string_view to_string(ExecutionOutcome outcome) {
  return outcome == ExecutionOutcome::Success ? "success" : "failure";
}

std::string to_json_line(const HistoryRecord& r) {
  json j;
  j["action"] = r.action;
  j["device"] = r.device;
  j["index"] = r.index;
  j["executed_at"] = format_rfc3339(r.executed_at);
  j["outcome"] = to_string(r.outcome);
  j["sample_id"] = r.sample_id ? json(*r.sample_id) : json(nullptr);
  return j.dump();
}

HistoryRecord parse_json_line(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(e.what());
  }
  if (!j.is_object()) {
    throw std::invalid_argument("history line is not an object");
  }
  try {
    HistoryRecord r;
    r.action = j.at("action").get<std::string>();
    r.device = j.at("device").get<std::string>();
    r.index = j.at("index").get<int>();
    r.executed_at = parse_rfc3339(j.at("executed_at").get<std::string>());
    const auto outcome = j.at("outcome").get<std::string>();
    if (outcome == "success") {
      r.outcome = ExecutionOutcome::Success;
    } else if (outcome == "failure") {
      r.outcome = ExecutionOutcome::Failure;
    } else {
      throw std::invalid_argument("unknown outcome: " + outcome);
    }
    if (auto it = j.find("sample_id"); it != j.end() && !it->is_null()) {
      r.sample_id = it->get<std::string>();
    }
    if (r.index < 1) {
      throw std::invalid_argument("history index must be >= 1");
    }
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(e.what());
  }
}

HistoryStore::HistoryStore(std::filesystem::path path) : path_(std::move(path)) {}

HistoryStore HistoryStore::load(const std::filesystem::path& path) {
  HistoryStore store(path);
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) {
    return store;
  }
  if (std::filesystem::is_directory(path, ec)) {
    throw HistoryIoError("history path is a directory: " + path.string());
  }
  std::ifstream in(path);
  if (!in) {
    throw HistoryIoError("cannot read history file: " + path.string());
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    try {
      store.records_.push_back(parse_json_line(line));
    } catch (const std::invalid_argument&) {
      ++store.skipped_lines_;
    }
  }
  return store;
}

const HistoryRecord& HistoryStore::append(HistoryRecord record) {
  if (record.index < 1) {
    throw std::invalid_argument("history index must be >= 1");
  }
  if (!records_.empty() && record.executed_at < records_.back().executed_at) {
    record.executed_at = records_.back().executed_at;
  }
  {
    std::ofstream out(path_, std::ios::app);
    if (!out) {
      throw HistoryIoError("cannot open history file for append: " + path_.string());
    }
    out << to_json_line(record) << '\n';
    out.flush();
    if (!out) {
      throw HistoryIoError("failed writing history file: " + path_.string());
    }
  }
  records_.push_back(std::move(record));
  return records_.back();
}

std::optional<int> HistoryStore::most_frequent_index(std::string_view device,
                                                     std::string_view action) const {
  std::map<int, int> counts;
  for (const auto& r : records_) {
    if (r.outcome == ExecutionOutcome::Success && r.device == device && r.action == action) {
      ++counts[r.index];
    }
  }
  std::optional<int> best;
  int best_count = 0;
  // std::map iterates ascending, so strict > keeps the smallest index on ties.
  for (const auto& [index, count] : counts) {
    if (count > best_count) {
      best = index;
      best_count = count;
    }
  }
  return best;
}

}  // namespace voxroute
