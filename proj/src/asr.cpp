// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxroute/asr.hpp"

#include <cctype>

#include "voxroute/process.hpp"

namespace voxroute {

std::string_view to_string(TranscriptSource s) {
  return s == TranscriptSource::Fixture ? "fixture" : "external_process";
}

Transcript FixtureTranscriber::transcribe(const AsrInput& input) {
  Transcript t;
  t.source = TranscriptSource::Fixture;
  t.reference = input.reference;
  if (input.hypothesis) {
    t.hypothesis = *input.hypothesis;
  } else {
    t.degraded = true;
    t.detail = "sample has no hypothesis transcript";
  }
  return t;
}

ExternalTranscriber::ExternalTranscriber(std::vector<std::string> command,
                                         std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout) {}

Transcript ExternalTranscriber::transcribe(const AsrInput& input) {
  Transcript t;
  t.source = TranscriptSource::ExternalProcess;
  t.reference = input.reference;
  if (!input.audio_path) {
    t.degraded = true;
    t.detail = "sample has no audio path";
    return t;
  }
  auto argv = command_;
  argv.push_back(*input.audio_path);
  const auto r = run_process(argv, "", timeout_);
  if (!r.ok()) {
    t.degraded = true;
    t.detail = describe_failure(r);
    return t;
  }
  const auto first = r.stdout_text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos) {
    const auto last = r.stdout_text.find_last_not_of(" \t\r\n");
    t.hypothesis = r.stdout_text.substr(first, last - first + 1);
  }
  return t;
}

std::string normalize_text(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (unsigned char c : s) {
    if (std::ispunct(c)) {
      continue;
    }
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

bool transcripts_match(std::string_view hypothesis, std::string_view reference) {
  return normalize_text(hypothesis) == normalize_text(reference);
}

}  // namespace voxroute
