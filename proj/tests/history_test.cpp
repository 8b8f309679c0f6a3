// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <sstream>

#include "test_support.hpp"
#include "voxroute/history.hpp"

namespace voxroute {
namespace {

using namespace std::chrono_literals;

HistoryRecord rec(std::string action, std::string device, int index,
                  ExecutionOutcome outcome = ExecutionOutcome::Success) {
  return {std::move(action), std::move(device), index, parse_rfc3339("2026-10-18T09:30:00.125Z"), outcome, "s001"};
}

std::vector<std::string> lines_of(const std::filesystem::path& p) {
  std::istringstream in(testing::slurp(p));
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST(HistoryLine, Format) {
  EXPECT_EQ(to_json_line(rec("turn_on", "light", 1)),
            R"({"action":"turn_on","device":"light","executed_at":"2026-10-18T09:30:00.125Z","index":1,)"
            R"("outcome":"success","sample_id":"s001"})");
  auto r = rec("turn_off", "speaker", 1, ExecutionOutcome::Failure);
  r.sample_id.reset();
  EXPECT_EQ(parse_json_line(to_json_line(r)), r);
}

TEST(HistoryLine, RejectsMalformed) {
  EXPECT_THROW(parse_json_line("{not json"), std::invalid_argument);
  EXPECT_THROW(parse_json_line(R"({"action":"turn_on"})"), std::invalid_argument);
  EXPECT_THROW(parse_json_line(R"({"action":"turn_on","device":"light","index":1,"executed_at":"yesterday",)"
                               R"("outcome":"success","sample_id":null})"),
               std::invalid_argument);
}

TEST(HistoryStore, FirstAppendCreatesOneLine) {
  testing::TempDir dir;
  HistoryStore h(dir / "h.jsonl");
  h.append(rec("turn_on", "light", 1));
  EXPECT_EQ(h.records().size(), 1u);
  EXPECT_EQ(lines_of(dir / "h.jsonl").size(), 1u);
}

TEST(HistoryStore, FileOrderMatchesAppendOrder) {
  testing::TempDir dir;
  HistoryStore h(dir / "h.jsonl");
  h.append(rec("turn_on", "light", 1));
  h.append(rec("turn_off", "light", 2));
  auto lines = lines_of(dir / "h.jsonl");
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(parse_json_line(lines[0]).action, "turn_on");
  EXPECT_EQ(parse_json_line(lines[1]).action, "turn_off");
}

TEST(HistoryStore, UnwritablePathThrowsAndLeavesMemoryUntouched) {
  testing::TempDir dir;
  testing::spit(dir / "blocker", "x");
  HistoryStore h(dir / "blocker" / "h.jsonl");  // parent is a regular file
  EXPECT_THROW(h.append(rec("turn_on", "light", 1)), HistoryIoError);
  EXPECT_TRUE(h.records().empty());
}

TEST(HistoryStore, RejectsNonPositiveIndex) {
  testing::TempDir dir;
  HistoryStore h(dir / "h.jsonl");
  EXPECT_THROW(h.append(rec("turn_on", "light", 0)), std::invalid_argument);
}

TEST(HistoryStore, TimestampsNeverGoBackwards) {
  testing::TempDir dir;
  HistoryStore h(dir / "h.jsonl");
  auto later = rec("turn_on", "light", 1);
  auto earlier = later;
  earlier.executed_at -= 5s;
  h.append(later);
  EXPECT_EQ(h.append(earlier).executed_at, later.executed_at);
}

TEST(HistoryStore, MostFrequentIndex) {
  testing::TempDir dir;
  HistoryStore h(dir / "h.jsonl");
  EXPECT_EQ(h.most_frequent_index("light", "turn_on"), std::nullopt);
  h.append(rec("turn_on", "light", 1, ExecutionOutcome::Failure));
  EXPECT_EQ(h.most_frequent_index("light", "turn_on"), std::nullopt);
  h.append(rec("turn_on", "light", 1));
  h.append(rec("turn_on", "light", 2));
  h.append(rec("turn_on", "light", 2));
  EXPECT_EQ(h.most_frequent_index("light", "turn_on"), 2);
  EXPECT_EQ(h.most_frequent_index("light", "turn_off"), std::nullopt);
  EXPECT_EQ(h.most_frequent_index("speaker", "turn_on"), std::nullopt);
}

TEST(HistoryStore, LoadMissingFileIsEmpty) {
  testing::TempDir dir;
  auto h = HistoryStore::load(dir / "nope.jsonl");
  EXPECT_TRUE(h.records().empty());
  EXPECT_EQ(h.skipped_lines(), 0u);
}

TEST(HistoryStore, LoadSkipsMalformedLines) {
  testing::TempDir dir;
  testing::spit(dir / "h.jsonl", to_json_line(rec("turn_on", "light", 1)) + "\n{garbage\n" +
                                     to_json_line(rec("turn_off", "light", 2)) + "\n\n");
  auto h = HistoryStore::load(dir / "h.jsonl");
  EXPECT_EQ(h.records().size(), 2u);
  EXPECT_EQ(h.skipped_lines(), 1u);
}

TEST(HistoryStore, LoadDirectoryIsAnError) {
  testing::TempDir dir;
  EXPECT_THROW(HistoryStore::load(dir.path()), HistoryIoError);
}

TEST(HistoryStore, AppendAfterLoadExtendsTheFile) {
  testing::TempDir dir;
  {
    HistoryStore h(dir / "h.jsonl");
    h.append(rec("turn_on", "light", 1));
  }
  auto h = HistoryStore::load(dir / "h.jsonl");
  h.append(rec("turn_on", "light", 2));
  EXPECT_EQ(HistoryStore::load(dir / "h.jsonl").records(), h.records());
  EXPECT_EQ(h.records().size(), 2u);
}

TEST(HistoryProperty, RoundTripAndDurability) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    testing::TempDir dir;
    HistoryStore h(dir / "h.jsonl");
    const int n = static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) {
      HistoryRecord r{rng() % 2 ? "turn_on" : "turn_off", rng() % 3 ? "light" : "speaker",
                      1 + static_cast<int>(rng() % 3), Timestamp{std::chrono::milliseconds(rng() % 4'000'000'000'000)},
                      rng() % 4 ? ExecutionOutcome::Success : ExecutionOutcome::Failure,
                      rng() % 2 ? std::optional<std::string>("s" + std::to_string(i)) : std::nullopt};
      h.append(r);
      // Every append is visible to a fresh reader immediately.
      EXPECT_EQ(HistoryStore::load(dir / "h.jsonl").records().size(), static_cast<std::size_t>(i + 1));
    }
    EXPECT_EQ(HistoryStore::load(dir / "h.jsonl").records(), h.records());
  }
}

TEST(HistoryProperty, FrequencyMatchesBruteForce) {
  std::mt19937_64 rng(13);
  const std::vector<std::string> devices{"light", "speaker"}, actions{"turn_on", "turn_off"};
  for (int trial = 0; trial < 200; ++trial) {
    testing::TempDir dir;
    HistoryStore h(dir / "h.jsonl");
    const int n = static_cast<int>(rng() % 50);
    for (int i = 0; i < n; ++i) {
      h.append({actions[rng() % 2], devices[rng() % 2], 1 + static_cast<int>(rng() % 4), utc_now(),
                rng() % 3 ? ExecutionOutcome::Success : ExecutionOutcome::Failure, std::nullopt});
    }
    for (const auto& d : devices) {
      for (const auto& a : actions) {
        std::optional<int> expect;
        int best = 0;
        for (int idx = 1; idx <= 4; ++idx) {
          int c = 0;
          for (const auto& r : h.records()) {
            c += r.device == d && r.action == a && r.index == idx && r.outcome == ExecutionOutcome::Success;
          }
          if (c > best) best = c, expect = idx;
        }
        EXPECT_EQ(h.most_frequent_index(d, a), expect);
      }
    }
  }
}

TEST(Rfc3339, RoundTrip) {
  auto ts = parse_rfc3339("2026-10-18T09:30:00.125Z");
  EXPECT_EQ(format_rfc3339(ts), "2026-10-18T09:30:00.125Z");
  EXPECT_EQ(format_rfc3339(Timestamp{}), "1970-01-01T00:00:00.000Z");
  EXPECT_THROW(parse_rfc3339("2026-10-18 09:30:00"), std::invalid_argument);
  EXPECT_THROW(parse_rfc3339("2026-13-18T09:30:00.000Z"), std::invalid_argument);
}

}  // namespace
}  // namespace voxroute
