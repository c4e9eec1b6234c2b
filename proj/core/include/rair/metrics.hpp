#pragma once

#include "rair/pipeline.hpp"
#include "rair/task.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rair {

struct EvalItem {
  std::string id;
  /// Sentence source; for N-best items the rank-1 candidate.
  std::string source;
  /// All candidates for N-best items, empty otherwise.
  std::vector<std::string> candidates;
  std::string hypothesis;
  std::string reference;
};

/// Levenshtein distance over NFC scalar values, unit costs.
std::size_t edit_distance(std::string_view a, std::string_view b);
std::size_t edit_distance(std::u32string_view a, std::u32string_view b);

struct CERReport {
  std::size_t total_edits = 0;
  std::size_t total_ref_chars = 0;
  double cer = 0.0;
};

enum class CerAveraging { Pooled, Macro };

/// Pooled: sum of edits over sum of reference lengths. Macro: mean of
/// per-item ratios (totals are still the pooled sums). Throws DataError
/// naming the first item with an empty reference.
CERReport cer(std::span<const EvalItem> items, CerAveraging averaging = CerAveraging::Pooled);

/// (baseline - improved) / baseline. Throws ArgumentError for a zero baseline.
double cerr(double cer_baseline, double cer_improved);

struct PRFReport {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// 2PR/(P+R), or 0 when P+R is 0.
double f1_score(double precision, double recall);

/// Sentence-level exact-match scoring: a prediction is positive when it
/// changes the source; a TP also equals the reference.
PRFReport sentence_prf(std::span<const EvalItem> items);

/// Items whose hypothesis meets the task's length predicate (for spelling:
/// same length as the source).
std::size_t length_accuracy(std::span<const EvalItem> items, TaskKind task);

/// bucket[r-1] counts results fixed by exactly r reflection rounds: the
/// first output violated the length predicate and the final one satisfies it.
std::vector<std::size_t> round_histogram(std::span<const CorrectionResult> results, std::size_t max_rounds);

struct MetricRecord {
  std::string name;
  double value = 0.0;
  std::string counts;
};

/// Every applicable metric for `items`, values in percent where rates.
std::vector<MetricRecord> evaluate(std::span<const EvalItem> items, TaskKind task,
                                   CerAveraging averaging = CerAveraging::Pooled);

/// "name = 66.1  (tp=.. fp=..)" lines; one decimal.
void write_report(std::ostream& out, std::span<const MetricRecord> records);
/// Tab-separated header row plus one value row, for diffing against tables.
void write_table(std::ostream& out, std::span<const MetricRecord> records);

/// Percent with one decimal, e.g. 0.6612 -> "66.1".
std::string format_percent(double fraction);

}  // namespace rair
