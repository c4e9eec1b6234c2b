#pragma once

#include "rair/llm.hpp"
#include "rair/task.hpp"
#include "rair/templates.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rair {

/// Spelling: L(y) == L(x). Splitting: L(y) <= L(x). N-best: L(y) within
/// [min L(X_i), max L(X_i)].
bool length_satisfied(const CorrectionTask& input, std::string_view output);

struct LengthReport {
  bool satisfied = false;
  std::string report_text;
  /// L(x), or the candidate lengths for N-best.
  std::vector<std::size_t> input_lengths;
  std::size_t output_length = 0;
};

LengthReport render_length_report(const CorrectionTask& input, std::string_view output,
                                  const TemplateSet& templates = TemplateSet::builtin());

/// Next-round prompt: the base prompt, a blank line, the source and the
/// previous output, then the length report.
std::string render_reflection_prompt(const std::string& base_prompt, const CorrectionTask& input,
                                     std::string_view previous_output, const LengthReport& report);

struct ReflectionRound {
  std::string prompt;
  std::string output;
  LengthReport report;
};

/// rounds[0] records the first-round call; rounds[i] for i >= 1 the i-th
/// reflection.
struct ReflectionTrace {
  std::vector<ReflectionRound> rounds;
  std::size_t rounds_used = 0;
  std::string final;
  bool satisfied = false;
  /// Backend failure that cut the loop short; `final` is the last good output.
  std::optional<std::string> error;
};

inline constexpr std::size_t kDefaultReflectionRounds = 4;

/// Multi-turn length reflection. While the current output violates the
/// length predicate and fewer than `max_rounds` reflections have run, sends
/// the length report back and takes the reply as the next output. Returns
/// the last output on exhaustion even if it still violates the predicate.
ReflectionTrace mlr(const CorrectionTask& input, const std::string& base_prompt, std::string first_output,
                    std::size_t max_rounds, ChatBackend& llm,
                    const TemplateSet& templates = TemplateSet::builtin());

}  // namespace rair
