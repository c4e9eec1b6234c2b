#include "http_util.hpp"
#include "rair/embedding.hpp"
#include "rair/errors.hpp"
#include "rair/llm.hpp"

#include <json.hpp>

#include <thread>

namespace rair {

HttpEmbedBackend::HttpEmbedBackend(EmbedBackendConfig config) : config_(std::move(config)) {
  if (config_.endpoint.empty()) {
    throw ConfigError("embedding endpoint is empty");
  }
  if (!(config_.timeout_seconds > 0.0)) {
    throw ConfigError("embedding timeout must be positive");
  }
  detail::parse_url(config_.endpoint);
}

std::vector<EmbeddingVector> HttpEmbedBackend::request(std::span<const std::string> texts) const {
  auto url = detail::parse_url(config_.endpoint);
  if (url.path.size() < 6 || url.path.compare(url.path.size() - 6, 6, "/embed") != 0) {
    if (!url.path.empty() && url.path.back() == '/') url.path.pop_back();
    url.path += "/embed";
  }
  auto client = detail::make_client(url, config_.timeout_seconds);
  const nlohmann::json body = {{"texts", std::vector<std::string>(texts.begin(), texts.end())}};
  auto response = client->Post(url.path, body.dump(), "application/json");
  if (!response) {
    throw TransportError("embed request failed: " + httplib::to_string(response.error()));
  }
  if (detail::is_transient_status(response->status)) {
    throw TransportError("embed endpoint returned HTTP " + std::to_string(response->status));
  }
  if (response->status != 200) {
    throw BackendError("embed endpoint returned HTTP " + std::to_string(response->status) + ": " +
                           response->body.substr(0, 200),
                       1);
  }
  try {
    const auto json = nlohmann::json::parse(response->body);
    const auto dim = json.at("dim").get<std::size_t>();
    const auto& rows = json.at("embeddings");
    if (rows.size() != texts.size()) {
      throw BackendError("embed endpoint returned " + std::to_string(rows.size()) +
                             " vectors for " + std::to_string(texts.size()) + " texts",
                         1);
    }
    std::vector<EmbeddingVector> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
      auto values = row.get<std::vector<double>>();
      if (values.size() != dim) {
        throw BackendError("embed endpoint vector length " + std::to_string(values.size()) +
                               " disagrees with dim " + std::to_string(dim),
                           1);
      }
      out.emplace_back(std::move(values));
    }
    dim_.store(dim);
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(std::string("malformed embed response: ") + e.what(), 1);
  }
}

std::vector<EmbeddingVector> HttpEmbedBackend::embed(std::span<const std::string> texts) {
  return with_retries(texts);
}

std::vector<EmbeddingVector> HttpEmbedBackend::with_retries(std::span<const std::string> texts) const {
  if (texts.empty()) return {};
  RetryPolicy policy;
  policy.max_retries = config_.max_retries;
  std::string last_error;
  for (std::size_t attempt = 0; attempt <= policy.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(policy.backoff(attempt - 1));
    try {
      return request(texts);
    } catch (const TransportError& e) {
      last_error = e.what();
    }
  }
  throw BackendError("embed backend failed after " + std::to_string(policy.max_retries + 1) +
                         " attempts: " + last_error,
                     policy.max_retries + 1);
}

std::size_t HttpEmbedBackend::dim() const {
  if (dim_.load() == 0) {
    const std::string probe = "维度";
    with_retries(std::span<const std::string>(&probe, 1));
  }
  return dim_.load();
}

}  // namespace rair
