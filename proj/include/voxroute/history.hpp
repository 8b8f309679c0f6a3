// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "voxroute/clock.hpp"

namespace voxroute {

enum class ExecutionOutcome { Success, Failure };

std::string_view to_string(ExecutionOutcome outcome);

struct HistoryRecord {
  std::string action;
  std::string device;
  int index = 1;
  Timestamp executed_at{};
  ExecutionOutcome outcome = ExecutionOutcome::Success;
  std::optional<std::string> sample_id;

  bool operator==(const HistoryRecord&) const = default;
};

// One JSON object per line, fields exactly
// action, device, index, executed_at, outcome, sample_id.
std::string to_json_line(const HistoryRecord& record);
// Throws std::invalid_argument on malformed input.
HistoryRecord parse_json_line(std::string_view line);

class HistoryIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Append-only command history backed by a JSON Lines file. Single writer;
// concurrent readers of a const snapshot are fine. No cross-process locking.
class HistoryStore {
 public:
  // An empty store that will create `path` on first append.
  explicit HistoryStore(std::filesystem::path path);

  // Reads `path`. A missing file yields an empty store. Malformed lines are
  // skipped and counted in skipped_lines(). Throws HistoryIoError when the
  // file exists but cannot be read.
  static HistoryStore load(const std::filesystem::path& path);

  // Writes the record as one line and flushes before returning. On failure
  // throws HistoryIoError and leaves the in-memory records untouched, so
  // memory and disk never diverge. executed_at is clamped to be
  // non-decreasing. Throws std::invalid_argument for index < 1.
  const HistoryRecord& append(HistoryRecord record);

  // Index with the most Success records for exactly (device, action);
  // ties go to the smallest index.
  std::optional<int> most_frequent_index(std::string_view device, std::string_view action) const;

  const std::vector<HistoryRecord>& records() const { return records_; }
  const std::filesystem::path& path() const { return path_; }
  std::size_t skipped_lines() const { return skipped_lines_; }

 private:
  std::filesystem::path path_;
  std::vector<HistoryRecord> records_;
  std::size_t skipped_lines_ = 0;
};

}  // namespace voxroute
