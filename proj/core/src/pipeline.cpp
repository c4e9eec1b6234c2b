#include "rair/pipeline.hpp"

#include "rair/errors.hpp"
#include "rair/parallel.hpp"

#include <json.hpp>

namespace rair {
namespace {

Attempt run_attempt(Method method, const CorrectionTask& task, ChatBackend& llm,
                    const ContextProvider& context, const PipelineConfig& cfg,
                    const TemplateSet& templates) {
  Attempt attempt;
  attempt.method = method;
  if (method == Method::Retrieval) {
    attempt.context = context.context_for(task, llm, cfg.retrieve_top_k);
  }
  const auto prompt = render_prompt(task, attempt.context, templates);
  std::string first;
  try {
    first = chat(prompt, llm);
  } catch (const BackendError& e) {
    attempt.trace.error = e.what();
    return attempt;
  }
  attempt.trace = mlr(task, prompt, std::move(first), cfg.mlr_rounds, llm, templates);
  return attempt;
}

CorrectionResult result_from(const CorrectionTask& task, const Attempt& attempt) {
  CorrectionResult result;
  result.id = task.id;
  result.method = attempt.method;
  result.output = attempt.trace.final;
  result.rounds_used = attempt.trace.rounds_used;
  result.satisfied = attempt.trace.satisfied;
  result.error = attempt.trace.error;
  return result;
}

bool has_output(const Attempt& attempt) { return !attempt.trace.rounds.empty(); }

CorrectionResult single_method(Method method, const CorrectionTask& task, ChatBackend& llm,
                               const ContextProvider& context, const PipelineConfig& cfg,
                               const TemplateSet& templates) {
  cfg.validate();
  const auto scoped = task.truncated(cfg.nbest_top);
  auto attempt = run_attempt(method, scoped, llm, context, cfg, templates);
  auto result = result_from(scoped, attempt);
  result.attempts.push_back(std::move(attempt));
  return result;
}

nlohmann::ordered_json report_json(const LengthReport& report) {
  return {{"satisfied", report.satisfied},
          {"text", report.report_text},
          {"input_lengths", report.input_lengths},
          {"output_length", report.output_length}};
}

}  // namespace

std::string_view to_string(Method method) {
  return method == Method::Retrieval ? "retrieval" : "direct";
}

Method parse_method(std::string_view name) {
  if (name == "retrieval") return Method::Retrieval;
  if (name == "direct") return Method::Direct;
  throw DataError("unknown method '" + std::string(name) + "'");
}

void PipelineConfig::validate() const {
  if (retrieve_top_k == 0 || mlr_rounds == 0 || adse_limit == 0 || nbest_top == 0) {
    throw ConfigError("retrieve_top_k, mlr_rounds, adse_limit and nbest_top must be positive");
  }
}

std::vector<std::string> IndexContext::context_for(const CorrectionTask& task, ChatBackend&,
                                                   std::size_t top_k) const {
  std::vector<std::string> out;
  for (const auto& r : retriever_.retrieve(task.query_text(), top_k)) out.push_back(r.doc->text);
  return out;
}

std::vector<std::string> BackgroundContext::context_for(const CorrectionTask& task, ChatBackend& llm,
                                                        std::size_t) const {
  std::vector<std::string> out;
  if (store_ != nullptr && store_->contains(task.id)) {
    for (const auto& doc : store_->get(task.id)) out.push_back(doc.text);
    return out;
  }
  if (generate_) {
    for (const auto& doc : generate_background(task.id, task.query_text(), llm, templates_)) {
      out.push_back(doc.text);
    }
  }
  return out;
}

CorrectionResult correct_direct(const CorrectionTask& task, ChatBackend& llm, const PipelineConfig& cfg,
                                const TemplateSet& templates) {
  return single_method(Method::Direct, task, llm, NoContext{}, cfg, templates);
}

CorrectionResult correct_with_retrieval(const CorrectionTask& task, ChatBackend& llm,
                                        const ContextProvider& context, const PipelineConfig& cfg,
                                        const TemplateSet& templates) {
  return single_method(Method::Retrieval, task, llm, context, cfg, templates);
}

CorrectionResult adaptive_correct(const CorrectionTask& task, ChatBackend& llm,
                                  const ContextProvider& context, const PipelineConfig& cfg,
                                  const TemplateSet& templates) {
  cfg.validate();
  const auto scoped = task.truncated(cfg.nbest_top);
  Method first = Method::Retrieval;
  Method second = Method::Direct;
  if (!scoped.has_training_set) {
    std::swap(first, second);
  }

  std::vector<Attempt> attempts;
  std::size_t counter = 0;
  while (true) {
    auto attempt = run_attempt(first, scoped, llm, context, cfg, templates);
    if (!attempt.trace.error && attempt.trace.satisfied) {
      attempt.counter = counter;
      auto result = result_from(scoped, attempt);
      attempts.push_back(std::move(attempt));
      result.attempts = std::move(attempts);
      return result;
    }
    attempt.counter = ++counter;
    const bool failed_hard = attempt.trace.error.has_value();
    attempts.push_back(std::move(attempt));
    if (failed_hard || counter >= cfg.adse_limit) {
      break;
    }
  }

  counter = 0;
  auto fallback = run_attempt(second, scoped, llm, context, cfg, templates);
  fallback.counter = counter;
  const Attempt& last_first = attempts.back();

  CorrectionResult result;
  if (!fallback.trace.error) {
    result = result_from(scoped, fallback);
    result.switched = true;
  } else if (has_output(last_first) && !last_first.trace.error) {
    // Fallback failed outright; keep the primary method's length-violating answer.
    result = result_from(scoped, last_first);
  } else {
    result = result_from(scoped, has_output(fallback) ? fallback : last_first);
    result.switched = has_output(fallback);
    result.error = "both methods failed: " + last_first.trace.error.value_or("length violation") +
                   " / " + fallback.trace.error.value_or("");
  }
  attempts.push_back(std::move(fallback));
  result.attempts = std::move(attempts);
  return result;
}

std::vector<CorrectionResult> run_batch(std::span<const CorrectionTask> tasks, const BackendFactory& backends,
                                        const ContextProvider& context, const PipelineConfig& cfg,
                                        std::size_t workers, const TemplateSet& templates) {
  cfg.validate();
  return parallel_map(tasks.size(), workers, [&](std::size_t i) {
    const auto& task = tasks[i];
    try {
      auto llm = backends(task);
      if (!llm) {
        throw ConfigError("no chat backend for task " + task.id);
      }
      return adaptive_correct(task, *llm, context, cfg, templates);
    } catch (const std::exception& e) {
      CorrectionResult failed;
      failed.id = task.id;
      failed.error = e.what();
      return failed;
    }
  });
}

std::string to_prediction_line(const CorrectionResult& result) {
  nlohmann::ordered_json record = {{"id", result.id},
                                   {"output", result.output},
                                   {"method", to_string(result.method)},
                                   {"rounds_used", result.rounds_used},
                                   {"switched", result.switched}};
  if (result.error) {
    record["error"] = *result.error;
  }
  return record.dump();
}

std::string to_trace_line(const CorrectionResult& result) {
  nlohmann::ordered_json attempts = nlohmann::ordered_json::array();
  for (const auto& attempt : result.attempts) {
    nlohmann::ordered_json rounds = nlohmann::ordered_json::array();
    for (const auto& round : attempt.trace.rounds) {
      rounds.push_back({{"prompt", round.prompt}, {"output", round.output}, {"report", report_json(round.report)}});
    }
    nlohmann::ordered_json a = {{"method", to_string(attempt.method)},
                                {"counter", attempt.counter},
                                {"context", attempt.context},
                                {"rounds_used", attempt.trace.rounds_used},
                                {"satisfied", attempt.trace.satisfied},
                                {"rounds", std::move(rounds)}};
    if (attempt.trace.error) a["error"] = *attempt.trace.error;
    attempts.push_back(std::move(a));
  }
  nlohmann::ordered_json record = {{"id", result.id},
                                   {"output", result.output},
                                   {"method", to_string(result.method)},
                                   {"switched", result.switched},
                                   {"satisfied", result.satisfied},
                                   {"attempts", std::move(attempts)}};
  if (result.error) record["error"] = *result.error;
  return record.dump();
}

}  // namespace rair
