#include "rair/config.hpp"
#include "rair/errors.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>

namespace rair {
namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path;
}

RunConfig::EnvLookup env_of(std::map<std::string, std::string> vars) {
  return [vars = std::move(vars)](const std::string& name) -> std::optional<std::string> {
    const auto it = vars.find(name);
    if (it == vars.end()) return std::nullopt;
    return it->second;
  };
}

TEST(RunConfig, Defaults) {
  const RunConfig config;
  const auto p = config.pipeline();
  EXPECT_EQ(p.retrieve_top_k, 5u);
  EXPECT_EQ(p.mlr_rounds, 4u);
  EXPECT_EQ(p.adse_limit, 1u);
  EXPECT_EQ(p.nbest_top, 5u);
  EXPECT_EQ(config.get_size("n_neg"), 5u);
  EXPECT_EQ(config.get("task"), "spelling");
}

TEST(RunConfig, FileThenEnvironment) {
  const auto path = write_temp("rair_config_test.conf",
                               "# comment\nmlr_rounds = 2\n  top_level_blank = \n"
                               "seed = 42  # trailing\n");
  EXPECT_THROW(RunConfig::load(path, env_of({})), ConfigError);

  const auto good = write_temp("rair_config_good.conf", "# comment\nmlr_rounds = 2\n\nseed = 42  # trailing\n");
  auto config = RunConfig::load(good, env_of({{"RAIR_SEED", "7"}}));
  EXPECT_EQ(config.get_size("mlr_rounds"), 2u);
  EXPECT_EQ(config.get_u64("seed"), 7u);
  config.set("seed", "9");
  EXPECT_EQ(config.pipeline().seed, 9u);
}

TEST(RunConfig, MalformedInputs) {
  const auto bad_line = write_temp("rair_config_bad.conf", "just words\n");
  EXPECT_THROW(RunConfig::load(bad_line, env_of({})), ConfigError);
  EXPECT_THROW(RunConfig::load(std::filesystem::path("/nonexistent/rair.conf"), env_of({})), ConfigError);

  RunConfig config;
  EXPECT_THROW(config.set("no_such_key", "1"), ConfigError);
  config.set("mlr_rounds", "two");
  EXPECT_THROW(config.pipeline(), ConfigError);
  config.set("mlr_rounds", "0");
  EXPECT_THROW(config.pipeline(), ConfigError);
  config.set("chat_timeout", "abc");
  EXPECT_THROW(config.get_double("chat_timeout"), ConfigError);
}

TEST(RunConfig, HashIgnoresSecretsButTracksSettings) {
  RunConfig a;
  RunConfig b;
  b.set("api_key", "sk-secret");
  EXPECT_EQ(a.hash(), b.hash());
  b.set("seed", "1");
  EXPECT_NE(a.hash(), b.hash());
  EXPECT_EQ(a.hash().size(), 16u);
}

TEST(RunConfig, BackendConfigs) {
  RunConfig config;
  EXPECT_THROW(config.chat_backend(), ConfigError);
  config.set("chat_url", "http://localhost:8000/v1/chat/completions");
  config.set("chat_model", "m");
  config.set("chat_retries", "1");
  const auto chat = config.chat_backend();
  EXPECT_EQ(chat.endpoint, "http://localhost:8000/v1/chat/completions");
  EXPECT_EQ(chat.max_retries, 1u);
  EXPECT_EQ(chat.temperature, 0.0);
}

}  // namespace
}  // namespace rair
