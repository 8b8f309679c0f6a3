// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxroute/clock.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace voxroute {

namespace {

int parse_field(std::string_view text, std::size_t pos, std::size_t len) {
  if (pos + len > text.size()) {
    throw std::invalid_argument("timestamp truncated: " + std::string(text));
  }
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, value);
  if (ec != std::errc{} || ptr != text.data() + pos + len) {
    throw std::invalid_argument("bad timestamp field: " + std::string(text));
  }
  return value;
}

void expect_char(std::string_view text, std::size_t pos, char c) {
  if (pos >= text.size() || text[pos] != c) {
    throw std::invalid_argument("bad timestamp: " + std::string(text));
  }
}

}  // namespace

Timestamp utc_now() {
  return std::chrono::floor<std::chrono::milliseconds>(std::chrono::system_clock::now());
}

std::string format_rfc3339(Timestamp ts) {
  using namespace std::chrono;
  const auto day = floor<days>(ts);
  const year_month_day ymd{day};
  const hh_mm_ss<milliseconds> tod{ts - day};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()), static_cast<int>(tod.subseconds().count()));
  return buf;
}

Timestamp parse_rfc3339(std::string_view text) {
  using namespace std::chrono;
  const int y = parse_field(text, 0, 4);
  expect_char(text, 4, '-');
  const int mo = parse_field(text, 5, 2);
  expect_char(text, 7, '-');
  const int d = parse_field(text, 8, 2);
  expect_char(text, 10, 'T');
  const int h = parse_field(text, 11, 2);
  expect_char(text, 13, ':');
  const int mi = parse_field(text, 14, 2);
  expect_char(text, 16, ':');
  const int s = parse_field(text, 17, 2);
  std::size_t pos = 19;
  int ms = 0;
  if (pos < text.size() && text[pos] == '.') {
    ms = parse_field(text, pos + 1, 3);
    pos += 4;
  }
  expect_char(text, pos, 'Z');
  if (pos + 1 != text.size()) {
    throw std::invalid_argument("trailing characters in timestamp: " + std::string(text));
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) {
    throw std::invalid_argument("timestamp out of range: " + std::string(text));
  }
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s} + milliseconds{ms};
}

}  // namespace voxroute
