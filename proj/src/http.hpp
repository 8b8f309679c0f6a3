// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

// Thin wrapper so only one translation unit pays for cpp-httplib.

#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>

namespace voxroute::http {

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;    // "" or "/v1" etc., never with a trailing slash
};

// Throws std::invalid_argument for anything that is not http(s)://host...
Url split_url(const std::string& url);

struct Reply {
  int status = 0;
  std::string body;
};

struct Outcome {
  std::optional<Reply> reply;
  std::string error;  // set when reply is empty
};

Outcome head(const std::string& url, std::chrono::milliseconds timeout);

Outcome post_json(const std::string& url, const std::string& body,
                  const std::map<std::string, std::string>& headers,
                  std::chrono::milliseconds timeout);

}  // namespace voxroute::http
