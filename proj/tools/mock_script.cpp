#include "mock_script.hpp"

#include "rair/errors.hpp"

#include <json.hpp>

#include <fstream>

namespace rair::cli {
namespace {

std::vector<MockReply> parse_replies(const nlohmann::json& list, const std::string& where) {
  if (!list.is_array()) {
    throw ConfigError("mock script: '" + where + "' must be an array");
  }
  std::vector<MockReply> replies;
  for (const auto& entry : list) {
    if (entry.is_string()) {
      replies.push_back(MockReply::reply(entry.get<std::string>()));
    } else if (entry.is_object() && entry.value("fail", false)) {
      replies.push_back(MockReply::failure());
    } else if (entry.is_object() && entry.value("echo_input", false)) {
      replies.push_back(MockReply::echo_input());
    } else {
      throw ConfigError("mock script: unrecognised reply in '" + where + "'");
    }
  }
  return replies;
}

}  // namespace

MockScript MockScript::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read mock script " + path.string());
  }
  nlohmann::json json;
  try {
    json = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("mock script " + path.string() + " is not valid JSON: " + e.what());
  }
  MockScript script;
  const auto policy = json.value("exhaustion", std::string("repeat_last"));
  if (policy == "repeat_last") {
    script.exhaustion_ = MockExhaustion::RepeatLast;
  } else if (policy == "error") {
    script.exhaustion_ = MockExhaustion::Error;
  } else {
    throw ConfigError("mock script: unknown exhaustion policy '" + policy + "'");
  }
  if (json.contains("default")) script.default_ = parse_replies(json["default"], "default");
  if (json.contains("items")) {
    for (const auto& [key, list] : json["items"].items()) {
      script.items_[key] = parse_replies(list, key);
    }
  }
  return script;
}

std::shared_ptr<MockChatBackend> MockScript::backend_for(const std::string& key) const {
  const auto it = items_.find(key);
  const auto& replies = it != items_.end() ? it->second : default_;
  if (replies.empty() && exhaustion_ == MockExhaustion::RepeatLast) {
    return std::make_shared<MockChatBackend>(std::vector<MockReply>{}, MockExhaustion::Error);
  }
  return std::make_shared<MockChatBackend>(replies, exhaustion_);
}

}  // namespace rair::cli
