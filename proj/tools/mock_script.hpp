#pragma once

#include "rair/llm.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace rair::cli {

/// Replay script for the scripted chat backend. JSON file:
///
///   {"exhaustion": "repeat_last" | "error",
///    "default": [reply, ...],
///    "items": {"<task id or expansion subject>": [reply, ...]}}
///
/// where a reply is a string, {"fail": true} for a transient failure, or
/// {"echo_input": true} to answer with the prompt's input sentence. Every
/// task gets a fresh backend over its own list, so results do not depend on
/// scheduling.
class MockScript {
 public:
  static MockScript load(const std::filesystem::path& path);

  std::shared_ptr<MockChatBackend> backend_for(const std::string& key) const;

 private:
  MockExhaustion exhaustion_ = MockExhaustion::RepeatLast;
  std::vector<MockReply> default_;
  std::map<std::string, std::vector<MockReply>> items_;
};

}  // namespace rair::cli
