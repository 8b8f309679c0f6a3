// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxroute/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "voxroute/serialize.hpp"

namespace voxroute {

namespace {

bool safe_file_stem(std::string_view id) {
  if (id.empty() || id == "." || id == "..") {
    return false;
  }
  return std::all_of(id.begin(), id.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-' || c == '.';
  });
}

}  // namespace

std::string_view to_string(SampleCategory c) {
  switch (c) {
    case SampleCategory::Complete:
      return "complete";
    case SampleCategory::IndexVariant:
      return "index_variant";
    case SampleCategory::Compound:
      return "compound";
    case SampleCategory::UnsupportedDevice:
      return "unsupported_device";
    case SampleCategory::Irrelevant:
      return "irrelevant";
  }
  return "?";
}

SampleCategory sample_category_from_string(std::string_view s) {
  if (s == "complete") return SampleCategory::Complete;
  if (s == "index_variant") return SampleCategory::IndexVariant;
  if (s == "compound") return SampleCategory::Compound;
  if (s == "unsupported_device") return SampleCategory::UnsupportedDevice;
  if (s == "irrelevant") return SampleCategory::Irrelevant;
  throw std::invalid_argument("unknown sample category: " + std::string(s));
}

std::vector<CorpusSample> parse_corpus(const std::string& json_text, std::optional<AsrAdapter> adapter) {
  json root = json::parse(json_text, nullptr, false);
  if (root.is_discarded()) {
    throw CorpusError("corpus manifest is not valid JSON");
  }
  if (!root.is_object() || !root.contains("samples") || !root["samples"].is_array()) {
    throw CorpusError("corpus manifest must be an object with a 'samples' array");
  }

  std::vector<CorpusSample> samples;
  std::set<std::string> ids;
  std::size_t position = 0;
  for (const auto& j : root["samples"]) {
    const std::string where = "sample #" + std::to_string(position++);
    try {
      CorpusSample s;
      s.sample_id = j.at("sample_id").get<std::string>();
      s.reference_transcript = j.at("reference_transcript").get<std::string>();
      if (auto it = j.find("hypothesis_transcript"); it != j.end() && !it->is_null()) {
        s.hypothesis_transcript = it->get<std::string>();
      }
      if (auto it = j.find("audio_path"); it != j.end() && !it->is_null()) {
        s.audio_path = it->get<std::string>();
      }
      if (auto it = j.find("expected_commands"); it != j.end()) {
        s.expected_commands = it->get<std::vector<DeviceCommand>>();
      }
      s.category = sample_category_from_string(j.at("category").get<std::string>());
      if (auto it = j.find("metrics"); it != j.end() && !it->is_null()) {
        FixtureMetrics m;
        m.cpu_pct = it->at("cpu_pct").get<double>();
        m.temp_c = it->at("temp_c").get<double>();
        m.latency_ms = it->at("latency_ms").get<double>();
        s.metrics = m;
      }
      if (!safe_file_stem(s.sample_id)) {
        throw CorpusError(where + ": sample_id '" + s.sample_id + "' is not usable as a file name");
      }
      if (!ids.insert(s.sample_id).second) {
        throw CorpusError(where + ": duplicate sample_id '" + s.sample_id + "'");
      }
      if (adapter == AsrAdapter::Fixture && !s.hypothesis_transcript) {
        throw CorpusError(where + ": fixture ASR needs hypothesis_transcript");
      }
      if (adapter == AsrAdapter::External && !s.audio_path) {
        throw CorpusError(where + ": external ASR needs audio_path");
      }
      samples.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw CorpusError(where + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw CorpusError(where + ": " + e.what());
    }
  }
  return samples;
}

std::vector<CorpusSample> load_corpus(const std::filesystem::path& path, std::optional<AsrAdapter> adapter) {
  std::ifstream in(path);
  if (!in) {
    throw CorpusError("cannot read corpus manifest: " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  auto samples = parse_corpus(ss.str(), adapter);
  for (auto& s : samples) {
    if (s.audio_path && std::filesystem::path(*s.audio_path).is_relative()) {
      s.audio_path = (path.parent_path() / *s.audio_path).string();
    }
  }
  return samples;
}

}  // namespace voxroute
