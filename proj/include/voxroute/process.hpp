// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <string>
#include <vector>

namespace voxroute {

struct ProcessResult {
  bool spawned = false;
  bool timed_out = false;
  int exit_code = -1;     // valid when the child exited normally
  int term_signal = 0;    // nonzero when the child died from a signal
  std::string stdout_text;
  std::string error;      // spawn/IO problem description

  bool ok() const { return spawned && !timed_out && term_signal == 0 && exit_code == 0; }
};

// Runs argv[0] (PATH lookup) with `input` on stdin and collects stdout until
// EOF. The child is SIGKILLed once `timeout` elapses. stderr is inherited.
ProcessResult run_process(const std::vector<std::string>& argv, const std::string& input,
                          std::chrono::milliseconds timeout);

// Human-readable reason for a failed result, e.g. "process exited 1".
std::string describe_failure(const ProcessResult& r);

}  // namespace voxroute
