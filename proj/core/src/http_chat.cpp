#include "http_util.hpp"
#include "rair/errors.hpp"
#include "rair/llm.hpp"

#include <json.hpp>

namespace rair {

void ChatBackendConfig::validate() const {
  if (endpoint.empty()) {
    throw ConfigError("chat backend endpoint is empty");
  }
  if (!(timeout_seconds > 0.0)) {
    throw ConfigError("chat backend timeout must be positive");
  }
  detail::parse_url(endpoint);
}

HttpChatBackend::HttpChatBackend(ChatBackendConfig config) : config_(std::move(config)) {
  config_.validate();
}

RetryPolicy HttpChatBackend::retry_policy() const {
  RetryPolicy policy;
  policy.max_retries = config_.max_retries;
  return policy;
}

std::string HttpChatBackend::send(const std::string& prompt) {
  const auto url = detail::parse_url(config_.endpoint);
  auto client = detail::make_client(url, config_.timeout_seconds);

  nlohmann::json body = {
      {"model", config_.model},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
      {"temperature", config_.temperature},
      {"stream", false},
  };
  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }
  auto response = client->Post(url.path, headers, body.dump(), "application/json");
  if (!response) {
    throw TransportError("chat request failed: " + httplib::to_string(response.error()));
  }
  if (detail::is_transient_status(response->status)) {
    throw TransportError("chat endpoint returned HTTP " + std::to_string(response->status));
  }
  if (response->status < 200 || response->status >= 300) {
    throw BackendError("chat endpoint returned HTTP " + std::to_string(response->status) + ": " +
                           response->body.substr(0, 200),
                       1);
  }
  try {
    const auto json = nlohmann::json::parse(response->body);
    return json.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(std::string("malformed chat completion: ") + e.what(), 1);
  }
}

}  // namespace rair
