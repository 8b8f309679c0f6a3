// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#include "http.hpp"

#include <stdexcept>

#include "httplib.h"

namespace voxroute::http {

namespace {

void apply_timeout(httplib::Client& client, std::chrono::milliseconds timeout) {
  const auto sec = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  const auto usec = std::chrono::duration_cast<std::chrono::microseconds>(timeout - sec);
  client.set_connection_timeout(sec.count(), usec.count());
  client.set_read_timeout(sec.count(), usec.count());
  client.set_write_timeout(sec.count(), usec.count());
}

Outcome from_result(const httplib::Result& res) {
  Outcome out;
  if (!res) {
    out.error = httplib::to_string(res.error());
    return out;
  }
  out.reply = Reply{res->status, res->body};
  return out;
}

}  // namespace

Url split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw std::invalid_argument("URL without scheme: " + url);
  }
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw std::invalid_argument("unsupported URL scheme: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  Url out;
  if (path_start == std::string::npos) {
    out.origin = url;
  } else {
    out.origin = url.substr(0, path_start);
    out.path = url.substr(path_start);
  }
  if (out.origin.size() <= scheme_end + 3) {
    throw std::invalid_argument("URL without host: " + url);
  }
  while (!out.path.empty() && out.path.back() == '/') {
    out.path.pop_back();
  }
  return out;
}

Outcome head(const std::string& url, std::chrono::milliseconds timeout) {
  Url parts;
  try {
    parts = split_url(url);
  } catch (const std::invalid_argument& e) {
    return Outcome{std::nullopt, e.what()};
  }
  httplib::Client client(parts.origin);
  apply_timeout(client, timeout);
  return from_result(client.Head(parts.path.empty() ? "/" : parts.path));
}

Outcome post_json(const std::string& url, const std::string& body,
                  const std::map<std::string, std::string>& headers,
                  std::chrono::milliseconds timeout) {
  Url parts;
  try {
    parts = split_url(url);
  } catch (const std::invalid_argument& e) {
    return Outcome{std::nullopt, e.what()};
  }
  httplib::Client client(parts.origin);
  apply_timeout(client, timeout);
  httplib::Headers hdrs;
  for (const auto& [k, v] : headers) {
    hdrs.emplace(k, v);
  }
  return from_result(client.Post(parts.path.empty() ? "/" : parts.path, hdrs, body, "application/json"));
}

}  // namespace voxroute::http
