#include "rair/reflection.hpp"

#include "rair/errors.hpp"
#include "rair/text.hpp"

#include <algorithm>

namespace rair {
namespace {

std::vector<std::size_t> input_lengths(const CorrectionTask& input) {
  if (input.task == TaskKind::NBest) {
    std::vector<std::size_t> lengths;
    lengths.reserve(input.candidates.size());
    for (const auto& c : input.candidates) lengths.push_back(length_of(c));
    return lengths;
  }
  return {length_of(input.source)};
}

bool satisfied_by(TaskKind task, const std::vector<std::size_t>& lengths, std::size_t output) {
  switch (task) {
    case TaskKind::Spelling:
      return output == lengths.front();
    case TaskKind::Splitting:
      return output <= lengths.front();
    case TaskKind::NBest: {
      const auto [lo, hi] = std::minmax_element(lengths.begin(), lengths.end());
      return *lo <= output && output <= *hi;
    }
  }
  return false;
}

}  // namespace

bool length_satisfied(const CorrectionTask& input, std::string_view output) {
  if (input.task == TaskKind::NBest && input.candidates.empty()) {
    throw DataError("n-best task has no candidates", input.id);
  }
  return satisfied_by(input.task, input_lengths(input), length_of(output));
}

LengthReport render_length_report(const CorrectionTask& input, std::string_view output,
                                  const TemplateSet& templates) {
  LengthReport report;
  report.input_lengths = input_lengths(input);
  report.output_length = length_of(output);
  report.satisfied = satisfied_by(input.task, report.input_lengths, report.output_length);
  if (report.satisfied) {
    report.report_text = templates.length.satisfied;
    return report;
  }
  const auto ly = std::to_string(report.output_length);
  switch (input.task) {
    case TaskKind::Spelling:
      report.report_text = fill_placeholders(
          templates.length.spelling, {{"Lx", std::to_string(report.input_lengths.front())}, {"Ly", ly}});
      break;
    case TaskKind::Splitting:
      report.report_text = fill_placeholders(
          templates.length.splitting, {{"Lx", std::to_string(report.input_lengths.front())}, {"Ly", ly}});
      break;
    case TaskKind::NBest: {
      const auto [lo, hi] = std::minmax_element(report.input_lengths.begin(), report.input_lengths.end());
      report.report_text = fill_placeholders(
          templates.length.nbest, {{"Lmin", std::to_string(*lo)}, {"Lmax", std::to_string(*hi)}, {"Ly", ly}});
      break;
    }
  }
  return report;
}

std::string render_reflection_prompt(const std::string& base_prompt, const CorrectionTask& input,
                                     std::string_view previous_output, const LengthReport& report) {
  std::string out = base_prompt;
  out += "\n\n";
  if (input.task == TaskKind::NBest) {
    out += "候选列表X：";
    out += join_candidates(input.candidates);
  } else {
    out += "源句x：";
    out += input.source;
  }
  out += "\n输出句y：";
  out += previous_output;
  out += '\n';
  out += report.report_text;
  return out;
}

ReflectionTrace mlr(const CorrectionTask& input, const std::string& base_prompt, std::string first_output,
                    std::size_t max_rounds, ChatBackend& llm, const TemplateSet& templates) {
  if (max_rounds == 0) {
    throw ArgumentError("reflection round limit must be at least 1");
  }
  ReflectionTrace trace;
  trace.rounds.push_back({base_prompt, first_output, render_length_report(input, first_output, templates)});

  for (std::size_t i = 0; i < max_rounds; ++i) {
    const auto& current = trace.rounds.back();
    if (current.report.satisfied) {
      trace.rounds_used = i;
      trace.final = current.output;
      trace.satisfied = true;
      return trace;
    }
    auto prompt = render_reflection_prompt(base_prompt, input, current.output, current.report);
    std::string next;
    try {
      next = chat(prompt, llm);
    } catch (const BackendError& e) {
      trace.rounds_used = i;
      trace.final = current.output;
      trace.satisfied = false;
      trace.error = e.what();
      return trace;
    }
    auto report = render_length_report(input, next, templates);
    trace.rounds.push_back({std::move(prompt), std::move(next), std::move(report)});
  }
  trace.rounds_used = max_rounds;
  trace.final = trace.rounds.back().output;
  trace.satisfied = trace.rounds.back().report.satisfied;
  return trace;
}

}  // namespace rair
