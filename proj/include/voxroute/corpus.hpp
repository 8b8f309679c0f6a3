// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "voxroute/command.hpp"
#include "voxroute/config.hpp"

namespace voxroute {

enum class SampleCategory { Complete, IndexVariant, Compound, UnsupportedDevice, Irrelevant };

std::string_view to_string(SampleCategory c);
SampleCategory sample_category_from_string(std::string_view s);

// One utterance in a replay manifest. expected_commands empty means the
// utterance should not produce anything executable. `metrics` feeds the
// fixture metric provider.
struct CorpusSample {
  std::string sample_id;
  std::string reference_transcript;
  std::optional<std::string> hypothesis_transcript;
  std::optional<std::string> audio_path;
  std::vector<DeviceCommand> expected_commands;
  SampleCategory category = SampleCategory::Complete;
  std::optional<FixtureMetrics> metrics;
};

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Manifest: {"samples": [...]}. Sample ids must be unique and usable as file
// names. With `adapter` given, also enforces the per-adapter field
// requirement (hypothesis for fixture, audio path for external).
std::vector<CorpusSample> parse_corpus(const std::string& json_text,
                                       std::optional<AsrAdapter> adapter = std::nullopt);
std::vector<CorpusSample> load_corpus(const std::filesystem::path& path,
                                      std::optional<AsrAdapter> adapter = std::nullopt);

}  // namespace voxroute
