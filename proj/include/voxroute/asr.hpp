// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace voxroute {

enum class TranscriptSource { Fixture, ExternalProcess };

std::string_view to_string(TranscriptSource s);

struct Transcript {
  std::string hypothesis;  // may be empty (silence or failed recognizer)
  std::optional<std::string> reference;
  TranscriptSource source = TranscriptSource::Fixture;
  bool degraded = false;
  std::string detail;  // failure description when degraded

  bool operator==(const Transcript&) const = default;
};

// What a transcriber gets to look at for one utterance.
struct AsrInput {
  std::optional<std::string> hypothesis;  // precomputed, for fixtures
  std::optional<std::string> reference;
  std::optional<std::string> audio_path;
};

// Boundary in front of the speech recognizer. No model lives in this library.
class Transcriber {
 public:
  virtual ~Transcriber() = default;
  virtual Transcript transcribe(const AsrInput& input) = 0;
};

// Returns the precomputed hypothesis byte-for-byte. A missing hypothesis
// gives an empty, degraded transcript.
class FixtureTranscriber final : public Transcriber {
 public:
  Transcript transcribe(const AsrInput& input) override;
};

// Runs `command... <audio_path>` and takes trimmed stdout as the hypothesis.
// Failures and timeouts give an empty, degraded transcript.
class ExternalTranscriber final : public Transcriber {
 public:
  ExternalTranscriber(std::vector<std::string> command, std::chrono::milliseconds timeout);
  Transcript transcribe(const AsrInput& input) override;

 private:
  std::vector<std::string> command_;
  std::chrono::milliseconds timeout_;
};

// Lowercase, drop punctuation, collapse whitespace, trim. Digits and number
// words are left alone, so "5" and "five" stay different.
std::string normalize_text(std::string_view s);

// normalize(hypothesis) == normalize(reference)
bool transcripts_match(std::string_view hypothesis, std::string_view reference);

}  // namespace voxroute
