#pragma once

#include "rair/errors.hpp"

#include <httplib.h>

#include <memory>
#include <string>

namespace rair::detail {

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

inline ParsedUrl parse_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("URL needs a scheme: " + url);
  }
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw ConfigError("unsupported URL scheme: " + url);
  }
  const auto path_begin = url.find('/', scheme_end + 3);
  ParsedUrl parsed;
  parsed.origin = url.substr(0, path_begin);
  parsed.path = path_begin == std::string::npos ? "/" : url.substr(path_begin);
  if (parsed.origin.size() <= scheme_end + 3) {
    throw ConfigError("URL has no host: " + url);
  }
  return parsed;
}

inline std::unique_ptr<httplib::Client> make_client(const ParsedUrl& url, double timeout_seconds) {
  auto client = std::make_unique<httplib::Client>(url.origin);
  const auto seconds = static_cast<time_t>(timeout_seconds);
  const auto micros = static_cast<time_t>((timeout_seconds - static_cast<double>(seconds)) * 1e6);
  client->set_connection_timeout(seconds, micros);
  client->set_read_timeout(seconds, micros);
  client->set_write_timeout(seconds, micros);
  return client;
}

/// 429 and 5xx are retryable; other non-2xx statuses are not.
inline bool is_transient_status(int status) { return status == 429 || status >= 500; }

}  // namespace rair::detail
