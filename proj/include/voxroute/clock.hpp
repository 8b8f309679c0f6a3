// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace voxroute {

// All timestamps are UTC with millisecond resolution so they survive a JSON
// round trip unchanged.
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

Timestamp utc_now();

// "2026-10-18T12:34:56.789Z"
std::string format_rfc3339(Timestamp ts);

// Accepts the format produced by format_rfc3339, with or without the
// fractional part. Throws std::invalid_argument on anything else.
Timestamp parse_rfc3339(std::string_view text);

}  // namespace voxroute
