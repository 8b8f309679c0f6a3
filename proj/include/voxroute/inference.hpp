// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "voxroute/command.hpp"

namespace voxroute {

enum class BackendId { Online, Offline, Template };

std::string_view to_string(BackendId id);
BackendId backend_id_from_string(std::string_view s);

struct PromptBundle {
  std::string system_text;
  std::string user_text;
  CommandVocabulary vocab;
};

struct InferenceResult {
  BackendId backend_id = BackendId::Template;
  std::string raw_output;
  double latency_ms = 0.0;
  std::string model_name;
  bool succeeded = false;
  std::optional<std::string> failure_reason;

  bool operator==(const InferenceResult&) const = default;
};

// Deterministic instruction text listing exactly the vocabulary's actions and
// device types and asking for a JSON array of {action, device, index}.
// Throws std::invalid_argument for an empty transcript.
PromptBundle build_prompt(std::string_view transcript, const CommandVocabulary& vocab);

// Rule-based stand-in for a language model. Always returns a JSON array.
//
// Clauses are split on the word "and". In each clause "turn on"/"switch on"
// and "turn off"/"switch off" select the action; a clause without an action
// word reuses the previous clause's action ("turn off light one and light
// two"). The device is the first vocabulary device word in the clause, or
// else the first non-filler word after the action phrase, so unsupported
// devices still surface. An index is the digit string or number word
// one..ten right after the device word. Input with no action word yields [].
std::string template_infer(std::string_view transcript, const CommandVocabulary& vocab);

class InferenceBackend {
 public:
  virtual ~InferenceBackend() = default;
  virtual BackendId id() const = 0;
  virtual std::string model_name() const = 0;
  // Never throws for backend failures; those come back as succeeded=false.
  virtual InferenceResult infer(const PromptBundle& bundle, std::chrono::milliseconds timeout) = 0;
};

class TemplateBackend final : public InferenceBackend {
 public:
  BackendId id() const override { return BackendId::Template; }
  std::string model_name() const override { return "template-rules"; }
  InferenceResult infer(const PromptBundle& bundle, std::chrono::milliseconds timeout) override;
};

// Chat-completion client: POST {base_url}/chat/completions with
// {model, messages:[system, user]}; reads choices[0].message.content.
class ChatCompletionBackend final : public InferenceBackend {
 public:
  ChatCompletionBackend(std::string base_url, std::string model, std::string api_key);
  BackendId id() const override { return BackendId::Online; }
  std::string model_name() const override { return model_; }
  InferenceResult infer(const PromptBundle& bundle, std::chrono::milliseconds timeout) override;

 private:
  std::string base_url_;
  std::string model_;
  std::string api_key_;
};

// Local model runner as a child process: prompt on stdin, completion on
// stdout, exit status 0.
class ProcessBackend final : public InferenceBackend {
 public:
  ProcessBackend(std::vector<std::string> command, std::string model_name);
  BackendId id() const override { return BackendId::Offline; }
  std::string model_name() const override { return model_name_; }
  InferenceResult infer(const PromptBundle& bundle, std::chrono::milliseconds timeout) override;

  // Text written to the child's stdin.
  static std::string render_stdin(const PromptBundle& bundle);

 private:
  std::vector<std::string> command_;
  std::string model_name_;
};

}  // namespace voxroute
