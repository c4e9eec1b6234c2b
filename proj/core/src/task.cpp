#include "rair/task.hpp"

#include "rair/errors.hpp"
#include "rair/text.hpp"

#include <algorithm>

namespace rair {

std::string_view to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::Spelling:
      return "spelling";
    case TaskKind::Splitting:
      return "splitting";
    case TaskKind::NBest:
      return "nbest";
  }
  return "spelling";
}

TaskKind parse_task_kind(std::string_view name) {
  if (name == "spelling") return TaskKind::Spelling;
  if (name == "splitting") return TaskKind::Splitting;
  if (name == "nbest" || name == "n-best") return TaskKind::NBest;
  throw ConfigError("unknown task kind '" + std::string(name) + "'");
}

void SentencePair::validate() const {
  if (task == TaskKind::NBest) {
    throw DataError("sentence pair cannot carry the nbest task", id);
  }
  const auto source_len = length_of(source);
  const auto target_len = length_of(target);
  if (task == TaskKind::Spelling && source_len != target_len) {
    throw DataError("spelling pair lengths differ (" + std::to_string(source_len) + " vs " +
                        std::to_string(target_len) + ")",
                    id);
  }
  if (task == TaskKind::Splitting && target_len > source_len) {
    throw DataError("splitting target longer than source", id);
  }
}

void NBestGroup::validate() const {
  if (candidates.empty()) {
    throw DataError("n-best group has no candidates", id);
  }
}

CorrectionTask CorrectionTask::sentence(std::string id, TaskKind kind, std::string source,
                                        bool has_training_set) {
  if (kind == TaskKind::NBest) {
    throw TaskError("sentence task cannot be of kind nbest");
  }
  CorrectionTask task;
  task.id = std::move(id);
  task.task = kind;
  task.source = std::move(source);
  task.has_training_set = has_training_set;
  return task;
}

CorrectionTask CorrectionTask::nbest(std::string id, std::vector<std::string> candidates,
                                     bool has_training_set) {
  if (candidates.empty()) {
    throw DataError("n-best task needs at least one candidate", id);
  }
  CorrectionTask task;
  task.id = std::move(id);
  task.task = TaskKind::NBest;
  task.candidates = std::move(candidates);
  task.has_training_set = has_training_set;
  return task;
}

CorrectionTask CorrectionTask::from(const SentencePair& pair, bool has_training_set) {
  auto task = sentence(pair.id, pair.task, pair.source, has_training_set);
  task.reference = pair.target;
  return task;
}

CorrectionTask CorrectionTask::from(const NBestGroup& group, bool has_training_set) {
  auto task = nbest(group.id, group.candidates, has_training_set);
  task.reference = group.target;
  return task;
}

const std::string& CorrectionTask::query_text() const {
  return task == TaskKind::NBest ? candidates.front() : source;
}

CorrectionTask CorrectionTask::truncated(std::size_t n) const {
  CorrectionTask copy = *this;
  if (copy.task == TaskKind::NBest && copy.candidates.size() > n) {
    copy.candidates.resize(std::max<std::size_t>(n, 1));
  }
  return copy;
}

}  // namespace rair
