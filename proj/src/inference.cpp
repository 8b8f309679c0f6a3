// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxroute/inference.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <future>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include "http.hpp"
#include "json.hpp"
#include "voxroute/process.hpp"

namespace voxroute {

using json = nlohmann::json;

namespace {

constexpr std::array<std::string_view, 10> kNumberWords = {"one", "two",   "three", "four", "five",
                                                          "six", "seven", "eight", "nine", "ten"};

const std::set<std::string_view> kFillerWords = {"the",   "a",    "an",  "my",   "your", "our",
                                                 "please", "all", "both", "this", "that", "those",
                                                 "these", "now",  "up",  "number"};

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) {
    tokens.push_back(std::move(cur));
  }
  return tokens;
}

bool is_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::optional<int> index_token(std::string_view tok) {
  if (is_digits(tok)) {
    if (tok.size() > 6) {
      return std::nullopt;
    }
    return std::stoi(std::string(tok));
  }
  for (std::size_t i = 0; i < kNumberWords.size(); ++i) {
    if (tok == kNumberWords[i]) {
      return static_cast<int>(i) + 1;
    }
  }
  return std::nullopt;
}

bool is_number_token(std::string_view tok) { return index_token(tok).has_value(); }

// Vocabulary device named by `tok`, accepting a plural "s".
std::optional<std::string> vocab_device(std::string_view tok, const CommandVocabulary& vocab) {
  if (vocab.has_device(tok)) {
    return std::string(tok);
  }
  if (tok.size() > 1 && tok.back() == 's' && vocab.has_device(tok.substr(0, tok.size() - 1))) {
    return std::string(tok.substr(0, tok.size() - 1));
  }
  return std::nullopt;
}

struct ActionMatch {
  std::string action;
  std::size_t end = 0;  // first token after the phrase
};

std::optional<ActionMatch> find_action(const std::vector<std::string>& toks) {
  for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
    if (toks[i] != "turn" && toks[i] != "switch") {
      continue;
    }
    if (toks[i + 1] == "on") {
      return ActionMatch{"turn_on", i + 2};
    }
    if (toks[i + 1] == "off") {
      return ActionMatch{"turn_off", i + 2};
    }
  }
  return std::nullopt;
}

std::optional<int> index_after(const std::vector<std::string>& toks, std::size_t device_pos) {
  std::size_t i = device_pos + 1;
  if (i < toks.size() && toks[i] == "number") {
    ++i;
  }
  if (i < toks.size()) {
    return index_token(toks[i]);
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(BackendId id) {
  switch (id) {
    case BackendId::Online:
      return "online";
    case BackendId::Offline:
      return "offline";
    case BackendId::Template:
      return "template";
  }
  return "?";
}

BackendId backend_id_from_string(std::string_view s) {
  if (s == "online") return BackendId::Online;
  if (s == "offline") return BackendId::Offline;
  if (s == "template") return BackendId::Template;
  throw std::invalid_argument("unknown backend id: " + std::string(s));
}

PromptBundle build_prompt(std::string_view transcript, const CommandVocabulary& vocab) {
  if (transcript.empty()) {
    throw std::invalid_argument("cannot build a prompt from an empty transcript");
  }
  std::ostringstream sys;
  sys << "You convert a spoken smart-home request into device commands.\n"
      << "Reply with a JSON array only. Each element is an object with the keys "
         "\"action\", \"device\" and \"index\".\n";
  sys << "Allowed actions:";
  for (std::size_t i = 0; i < vocab.actions.size(); ++i) {
    sys << (i ? ", " : " ") << vocab.actions[i];
  }
  sys << "\nAllowed devices:";
  bool first = true;
  for (const auto& [device, count] : vocab.devices) {
    sys << (first ? " " : ", ") << device << " (1-" << count << ")";
    first = false;
  }
  sys << "\n\"index\" is the 1-based instance number of the device, or null when the request "
         "does not say which one.\n"
      << "Use one element per requested action. If the request is not a command for these "
         "devices, reply with [].\n";
  if (!vocab.actions.empty() && !vocab.devices.empty()) {
    const auto& action = vocab.actions.front();
    const auto& device = vocab.devices.begin()->first;
    std::string spoken = action;
    std::replace(spoken.begin(), spoken.end(), '_', ' ');
    sys << "Example: \"" << spoken << " " << device << " one\" -> "
        << commands_to_json({DeviceCommand{action, device, 1}}) << "\n";
  }
  return PromptBundle{sys.str(), std::string(transcript), vocab};
}

std::string template_infer(std::string_view transcript, const CommandVocabulary& vocab) {
  const auto tokens = tokenize(transcript);

  std::vector<std::vector<std::string>> clauses(1);
  for (const auto& t : tokens) {
    if (t == "and") {
      clauses.emplace_back();
    } else {
      clauses.back().push_back(t);
    }
  }

  std::vector<DeviceCommand> commands;
  std::optional<std::string> last_action;
  for (const auto& clause : clauses) {
    const auto action = find_action(clause);
    std::optional<std::string> device;
    std::optional<std::size_t> device_pos;

    for (std::size_t i = 0; i < clause.size(); ++i) {
      if (action && i + 2 == action->end) {
        ++i;  // skip "turn on" / "switch off"
        continue;
      }
      if (auto d = vocab_device(clause[i], vocab)) {
        device = std::move(d);
        device_pos = i;
        break;
      }
    }

    if (!action) {
      // Continuation clause: "... and light two".
      if (!last_action || !device) {
        continue;
      }
    } else {
      last_action = action->action;
      if (!device) {
        for (std::size_t i = action->end; i < clause.size(); ++i) {
          if (kFillerWords.count(clause[i]) == 0 && !is_number_token(clause[i])) {
            device = clause[i];
            device_pos = i;
            break;
          }
        }
      }
    }

    DeviceCommand cmd;
    cmd.action = last_action;
    cmd.device = device;
    if (device_pos) {
      cmd.index = index_after(clause, *device_pos);
    }
    commands.push_back(std::move(cmd));
  }
  return commands_to_json(commands);
}

InferenceResult TemplateBackend::infer(const PromptBundle& bundle, std::chrono::milliseconds) {
  const auto start = std::chrono::steady_clock::now();
  InferenceResult r;
  r.backend_id = BackendId::Template;
  r.model_name = model_name();
  r.raw_output = template_infer(bundle.user_text, bundle.vocab);
  r.succeeded = true;
  r.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

ChatCompletionBackend::ChatCompletionBackend(std::string base_url, std::string model, std::string api_key)
    : base_url_(std::move(base_url)), model_(std::move(model)), api_key_(std::move(api_key)) {
  while (!base_url_.empty() && base_url_.back() == '/') {
    base_url_.pop_back();
  }
}

InferenceResult ChatCompletionBackend::infer(const PromptBundle& bundle, std::chrono::milliseconds timeout) {
  InferenceResult r;
  r.backend_id = BackendId::Online;
  r.model_name = model_;

  json body;
  body["model"] = model_;
  body["temperature"] = 0;
  body["messages"] = json::array({
      {{"role", "system"}, {"content", bundle.system_text}},
      {{"role", "user"}, {"content", bundle.user_text}},
  });
  std::map<std::string, std::string> headers;
  if (!api_key_.empty()) {
    headers["Authorization"] = "Bearer " + api_key_;
  }

  // The request runs on its own thread so a slow server cannot hold us past
  // the deadline; a straggler finishes on its own httplib timeouts.
  // Transcripts from external tools are not guaranteed to be valid UTF-8.
  auto payload = body.dump(-1, ' ', false, json::error_handler_t::replace);
  auto task = std::make_shared<std::packaged_task<http::Outcome()>>(
      [url = base_url_ + "/chat/completions", payload = std::move(payload), headers, timeout] {
        return http::post_json(url, payload, headers, timeout);
      });
  auto future = task->get_future();
  const auto start = std::chrono::steady_clock::now();
  std::thread([task] { (*task)(); }).detach();

  constexpr auto kGrace = std::chrono::milliseconds(250);
  if (future.wait_for(timeout + kGrace) != std::future_status::ready) {
    r.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    r.failure_reason = "request timed out";
    return r;
  }
  const auto outcome = future.get();
  r.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  if (!outcome.reply) {
    r.failure_reason = "request failed: " + outcome.error;
    return r;
  }
  if (outcome.reply->status < 200 || outcome.reply->status >= 300) {
    r.failure_reason = "HTTP " + std::to_string(outcome.reply->status);
    return r;
  }
  const json resp = json::parse(outcome.reply->body, nullptr, false);
  const json::json_pointer content_ptr("/choices/0/message/content");
  if (resp.is_discarded() || !resp.contains(content_ptr) || !resp.at(content_ptr).is_string()) {
    r.failure_reason = "malformed chat completion response";
    return r;
  }
  r.raw_output = resp.at(content_ptr).get<std::string>();
  r.succeeded = true;
  return r;
}

ProcessBackend::ProcessBackend(std::vector<std::string> command, std::string model_name)
    : command_(std::move(command)), model_name_(std::move(model_name)) {}

std::string ProcessBackend::render_stdin(const PromptBundle& bundle) {
  return bundle.system_text + "\nRequest: " + bundle.user_text + "\n";
}

InferenceResult ProcessBackend::infer(const PromptBundle& bundle, std::chrono::milliseconds timeout) {
  InferenceResult r;
  r.backend_id = BackendId::Offline;
  r.model_name = model_name_;
  const auto start = std::chrono::steady_clock::now();
  const auto proc = run_process(command_, render_stdin(bundle), timeout);
  r.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (!proc.ok()) {
    r.failure_reason = describe_failure(proc);
    return r;
  }
  r.raw_output = proc.stdout_text;
  r.succeeded = true;
  return r;
}

}  // namespace voxroute
