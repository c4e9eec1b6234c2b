#include "rair/config.hpp"

#include "rair/errors.hpp"
#include "rair/text.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace rair {
namespace {

const std::map<std::string, std::string>& defaults() {
  static const std::map<std::string, std::string> values = {
      {"adse_limit", "1"},     {"api_key", ""},         {"chat_model", ""},
      {"chat_retries", "3"},   {"chat_timeout", "60"},  {"chat_url", ""},
      {"domain_tag", ""},      {"embed_dim", "256"},    {"embed_url", ""},
      {"mlr_rounds", "4"},     {"n_neg", "5"},          {"nbest_top", "5"},
      {"retrieve_top_k", "5"}, {"seed", "0"},           {"task", "spelling"},
      {"temperature", "0"},    {"templates_dir", ""},   {"workers", "0"},
  };
  return values;
}

// Keys that never change results: the worker count and credentials.
bool excluded_from_hash(const std::string& key) { return key == "api_key" || key == "workers"; }

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

}  // namespace

RunConfig::RunConfig() : values_(defaults()) {}

std::optional<std::string> RunConfig::process_env(const std::string& name) {
  if (const char* value = std::getenv(name.c_str())) return std::string(value);
  return std::nullopt;
}

RunConfig RunConfig::load(const std::optional<std::filesystem::path>& file, const EnvLookup& env) {
  RunConfig config;
  if (file) {
    std::ifstream in(*file);
    if (!in) {
      throw ConfigError("cannot read config file " + file->string());
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      const auto body = trim(line);
      if (body.empty()) continue;
      const auto eq = body.find('=');
      if (eq == std::string::npos) {
        throw ConfigError(file->string() + ":" + std::to_string(line_no) + ": expected key = value");
      }
      config.set(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
    }
  }
  if (env) {
    for (const auto& [key, _] : defaults()) {
      if (auto value = env("RAIR_" + upper(key))) config.set(key, *value);
    }
  }
  return config;
}

void RunConfig::set(const std::string& key, std::string value) {
  if (!defaults().count(key)) {
    throw ConfigError("unknown config key '" + key + "'");
  }
  values_[key] = std::move(value);
}

const std::string& RunConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw ConfigError("unknown config key '" + key + "'");
  }
  return it->second;
}

std::uint64_t RunConfig::get_u64(const std::string& key) const {
  const auto& text = get(key);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("config key '" + key + "' expects a non-negative integer, got '" + text + "'");
  }
  return value;
}

std::size_t RunConfig::get_size(const std::string& key) const {
  return static_cast<std::size_t>(get_u64(key));
}

double RunConfig::get_double(const std::string& key) const {
  const auto& text = get(key);
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw ConfigError("config key '" + key + "' expects a number, got '" + text + "'");
  }
  return value;
}

std::string RunConfig::hash() const {
  std::string canonical;
  for (const auto& [key, value] : values_) {
    if (excluded_from_hash(key)) continue;
    canonical += key;
    canonical += '=';
    canonical += value;
    canonical += '\n';
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(fnv1a(canonical)));
  return buffer;
}

PipelineConfig RunConfig::pipeline() const {
  PipelineConfig cfg;
  cfg.retrieve_top_k = get_size("retrieve_top_k");
  cfg.mlr_rounds = get_size("mlr_rounds");
  cfg.adse_limit = get_size("adse_limit");
  cfg.nbest_top = get_size("nbest_top");
  cfg.seed = get_u64("seed");
  cfg.validate();
  return cfg;
}

ChatBackendConfig RunConfig::chat_backend() const {
  ChatBackendConfig cfg;
  cfg.endpoint = get("chat_url");
  cfg.model = get("chat_model");
  cfg.timeout_seconds = get_double("chat_timeout");
  cfg.max_retries = get_size("chat_retries");
  cfg.temperature = get_double("temperature");
  cfg.api_key = get("api_key");
  cfg.validate();
  return cfg;
}

EmbedBackendConfig RunConfig::embed_backend() const {
  EmbedBackendConfig cfg;
  cfg.endpoint = get("embed_url");
  cfg.timeout_seconds = get_double("chat_timeout");
  cfg.max_retries = get_size("chat_retries");
  return cfg;
}

}  // namespace rair
