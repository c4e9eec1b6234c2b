#pragma once

#include "rair/embedding.hpp"
#include "rair/llm.hpp"
#include "rair/pipeline.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace rair {

/// Flat key/value run configuration. Sources, lowest precedence first:
/// built-in defaults, a `key = value` file (# starts a comment), then
/// RAIR_<KEY> environment variables, then explicit set() calls.
class RunConfig {
 public:
  using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

  RunConfig();

  /// Throws ConfigError on unknown keys or malformed lines.
  static RunConfig load(const std::optional<std::filesystem::path>& file, const EnvLookup& env = process_env);
  static std::optional<std::string> process_env(const std::string& name);

  void set(const std::string& key, std::string value);
  const std::string& get(const std::string& key) const;
  std::size_t get_size(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  double get_double(const std::string& key) const;

  /// FNV-1a hex digest over every key except api_key and workers, in sorted order.
  std::string hash() const;

  PipelineConfig pipeline() const;
  ChatBackendConfig chat_backend() const;
  EmbedBackendConfig embed_backend() const;

  const std::map<std::string, std::string>& values() const noexcept { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace rair
