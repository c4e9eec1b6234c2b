#pragma once

#include "rair/task.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rair {

inline constexpr std::string_view kInputPlaceholder = "<input_sentence>";

/// Task instruction whose body contains `<input_sentence>` exactly once.
class PromptTemplate {
 public:
  PromptTemplate(TaskKind task, std::string body);

  TaskKind task() const noexcept { return task_; }
  const std::string& body() const noexcept { return body_; }

  std::string fill(std::string_view input) const;

 private:
  TaskKind task_;
  std::string body_;
};

/// Length-report templates; placeholders are {Lx}, {Ly}, {Lmin}, {Lmax}.
struct LengthTemplates {
  std::string satisfied;
  std::string spelling;
  std::string splitting;
  std::string nbest;
};

/// Corpus-expansion instructions; placeholder is {text}.
struct ExpansionTemplates {
  std::string term;
  std::string sentence;
  std::string background;
};

/// Every text asset the pipeline sends to a chat backend.
struct TemplateSet {
  std::map<TaskKind, PromptTemplate> prompts;
  std::string context_header;
  LengthTemplates length;
  ExpansionTemplates expansion;

  /// Assets compiled into the library from core/assets.
  static const TemplateSet& builtin();

  /// Reads the same layout as core/assets (prompts/, length/, expansion/).
  /// Missing files raise ConfigError.
  static TemplateSet load(const std::filesystem::path& root);

  const PromptTemplate& prompt(TaskKind task) const;
};

/// Replaces every `{name}` with its value. Unknown placeholders are left as is.
std::string fill_placeholders(std::string_view text,
                              const std::vector<std::pair<std::string, std::string>>& values);

namespace detail {
std::string_view builtin_asset(std::string_view name);
}  // namespace detail

}  // namespace rair
