#pragma once

#include "rair/corpus.hpp"
#include "rair/llm.hpp"
#include "rair/reflection.hpp"
#include "rair/retriever.hpp"
#include "rair/task.hpp"
#include "rair/templates.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rair {

enum class Method { Retrieval, Direct };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

struct PipelineConfig {
  std::size_t retrieve_top_k = 5;
  std::size_t mlr_rounds = kDefaultReflectionRounds;
  /// Failed primary-method attempts (each a full reflection loop) before switching.
  std::size_t adse_limit = 1;
  std::size_t nbest_top = 5;
  std::uint64_t seed = 0;

  /// Throws ConfigError unless every field is positive (seed excepted).
  void validate() const;
};

/// Supplies retrieved sentences for the retrieval-based method.
class ContextProvider {
 public:
  virtual ~ContextProvider() = default;
  virtual std::vector<std::string> context_for(const CorrectionTask& task, ChatBackend& llm,
                                               std::size_t top_k) const = 0;
};

/// Training-set mode: top-k corpus sentences for the task's query text.
class IndexContext : public ContextProvider {
 public:
  explicit IndexContext(const Retriever& retriever) : retriever_(retriever) {}
  std::vector<std::string> context_for(const CorrectionTask& task, ChatBackend& llm,
                                       std::size_t top_k) const override;

 private:
  const Retriever& retriever_;
};

/// No-training-set mode: the background description attached to the task,
/// generated through the task's backend when the store has none.
class BackgroundContext : public ContextProvider {
 public:
  explicit BackgroundContext(const BackgroundStore* store = nullptr, bool generate = true,
                             const TemplateSet& templates = TemplateSet::builtin())
      : store_(store), generate_(generate), templates_(templates) {}
  std::vector<std::string> context_for(const CorrectionTask& task, ChatBackend& llm,
                                       std::size_t top_k) const override;

 private:
  const BackgroundStore* store_;
  bool generate_;
  const TemplateSet& templates_;
};

class NoContext : public ContextProvider {
 public:
  std::vector<std::string> context_for(const CorrectionTask&, ChatBackend&, std::size_t) const override {
    return {};
  }
};

/// One run of a method: first-round call plus its reflection loop.
struct Attempt {
  Method method = Method::Direct;
  std::vector<std::string> context;
  ReflectionTrace trace;
  /// Adaptive-selection failure counter after this attempt.
  std::size_t counter = 0;
};

struct CorrectionResult {
  std::string id;
  std::string output;
  Method method = Method::Direct;
  std::size_t rounds_used = 0;
  bool switched = false;
  bool satisfied = false;
  std::vector<Attempt> attempts;
  std::optional<std::string> error;

  bool ok() const noexcept { return !error.has_value(); }
};

CorrectionResult correct_direct(const CorrectionTask& task, ChatBackend& llm, const PipelineConfig& cfg,
                                const TemplateSet& templates = TemplateSet::builtin());

/// Empty context degrades to the direct prompt.
CorrectionResult correct_with_retrieval(const CorrectionTask& task, ChatBackend& llm,
                                        const ContextProvider& context, const PipelineConfig& cfg,
                                        const TemplateSet& templates = TemplateSet::builtin());

/// Adaptive selection. The primary method is retrieval when the task has a training
/// set, direct otherwise. After `adse_limit` primary attempts that end with
/// a length violation (or a backend error), switches once to the other method and
/// returns its result.
CorrectionResult adaptive_correct(const CorrectionTask& task, ChatBackend& llm,
                                  const ContextProvider& context, const PipelineConfig& cfg,
                                  const TemplateSet& templates = TemplateSet::builtin());

using BackendFactory = std::function<std::shared_ptr<ChatBackend>(const CorrectionTask&)>;

/// Adaptive correction of every task on up to `workers` threads. Results are
/// in task order; an exception inside one task becomes that task's error.
std::vector<CorrectionResult> run_batch(std::span<const CorrectionTask> tasks, const BackendFactory& backends,
                                        const ContextProvider& context, const PipelineConfig& cfg,
                                        std::size_t workers = 1,
                                        const TemplateSet& templates = TemplateSet::builtin());

/// {"id","output","method","rounds_used","switched"} (+ "error" when set).
std::string to_prediction_line(const CorrectionResult& result);
/// Full per-attempt, per-round trace for audit.
std::string to_trace_line(const CorrectionResult& result);

}  // namespace rair
