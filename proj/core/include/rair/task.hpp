#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rair {

enum class TaskKind { Spelling, Splitting, NBest };

std::string_view to_string(TaskKind kind);
/// Accepts "spelling", "splitting", "nbest" (also "n-best"). Throws ConfigError.
TaskKind parse_task_kind(std::string_view name);

/// One erroneous/correct sentence pair.
struct SentencePair {
  std::string id;
  std::string source;
  std::string target;
  TaskKind task = TaskKind::Spelling;

  /// Throws DataError if the length relation required by `task` is violated.
  void validate() const;
};

/// ASR decoder candidates in rank order, rank 1 first.
struct NBestGroup {
  std::string id;
  std::vector<std::string> candidates;
  std::string target;

  void validate() const;
};

/// Input to the correction pipeline. Sentence tasks use `source`; N-best
/// tasks use `candidates`. Use the factories, which enforce that.
struct CorrectionTask {
  std::string id;
  TaskKind task = TaskKind::Spelling;
  std::string source;
  std::vector<std::string> candidates;
  bool has_training_set = false;
  std::optional<std::string> reference;

  static CorrectionTask sentence(std::string id, TaskKind kind, std::string source,
                                 bool has_training_set = false);
  static CorrectionTask nbest(std::string id, std::vector<std::string> candidates,
                              bool has_training_set = false);
  static CorrectionTask from(const SentencePair& pair, bool has_training_set);
  static CorrectionTask from(const NBestGroup& group, bool has_training_set);

  /// Text used as the retrieval query and as the PRF "source": the sentence
  /// itself, or the rank-1 candidate.
  const std::string& query_text() const;

  /// Copy keeping only the first `n` candidates (no-op for sentence tasks).
  CorrectionTask truncated(std::size_t n) const;
};

}  // namespace rair
