#include "rair/metrics.hpp"

#include "rair/errors.hpp"
#include "rair/reflection.hpp"
#include "rair/text.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>

namespace rair {

std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t above = row[j];
      const std::size_t substitute = diagonal + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({above + 1, row[j - 1] + 1, substitute});
      diagonal = above;
    }
  }
  return row[b.size()];
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  return edit_distance(to_scalars(a), to_scalars(b));
}

CERReport cer(std::span<const EvalItem> items, CerAveraging averaging) {
  CERReport report;
  double ratio_sum = 0.0;
  for (const auto& item : items) {
    const auto reference = to_scalars(item.reference);
    if (reference.empty()) {
      throw DataError("empty reference in CER item", item.id);
    }
    const auto edits = edit_distance(reference, to_scalars(item.hypothesis));
    report.total_edits += edits;
    report.total_ref_chars += reference.size();
    ratio_sum += static_cast<double>(edits) / static_cast<double>(reference.size());
  }
  if (items.empty()) return report;
  report.cer = averaging == CerAveraging::Pooled
                   ? static_cast<double>(report.total_edits) / static_cast<double>(report.total_ref_chars)
                   : ratio_sum / static_cast<double>(items.size());
  return report;
}

double cerr(double cer_baseline, double cer_improved) {
  if (cer_baseline == 0.0) {
    throw ArgumentError("CERR is undefined for a zero baseline CER");
  }
  return (cer_baseline - cer_improved) / cer_baseline;
}

double f1_score(double precision, double recall) {
  const double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

PRFReport sentence_prf(std::span<const EvalItem> items) {
  PRFReport report;
  std::size_t predicted = 0;
  std::size_t condition = 0;
  for (const auto& item : items) {
    const auto source = nfc(item.source);
    const auto hypothesis = nfc(item.hypothesis);
    const auto reference = nfc(item.reference);
    const bool changed = hypothesis != source;
    const bool needs_change = reference != source;
    predicted += changed ? 1 : 0;
    condition += needs_change ? 1 : 0;
    if (changed && hypothesis == reference) ++report.tp;
  }
  report.fp = predicted - report.tp;
  report.fn = condition - report.tp;
  report.precision = predicted == 0 ? 0.0 : static_cast<double>(report.tp) / static_cast<double>(predicted);
  report.recall = condition == 0 ? 0.0 : static_cast<double>(report.tp) / static_cast<double>(condition);
  report.f1 = f1_score(report.precision, report.recall);
  return report;
}

std::size_t length_accuracy(std::span<const EvalItem> items, TaskKind task) {
  return static_cast<std::size_t>(std::count_if(items.begin(), items.end(), [task](const EvalItem& item) {
    const auto input = task == TaskKind::NBest
                           ? CorrectionTask::nbest(item.id, item.candidates.empty()
                                                                ? std::vector<std::string>{item.source}
                                                                : item.candidates)
                           : CorrectionTask::sentence(item.id, task, item.source);
    return length_satisfied(input, item.hypothesis);
  }));
}

std::vector<std::size_t> round_histogram(std::span<const CorrectionResult> results, std::size_t max_rounds) {
  std::vector<std::size_t> buckets(max_rounds, 0);
  for (const auto& result : results) {
    if (result.attempts.empty()) continue;
    const auto& attempt = result.attempts.back();
    const auto& trace = attempt.trace;
    if (trace.rounds.empty() || trace.error || !trace.satisfied) continue;
    if (trace.rounds.front().report.satisfied) continue;
    if (trace.rounds_used >= 1 && trace.rounds_used <= max_rounds) {
      ++buckets[trace.rounds_used - 1];
    }
  }
  return buckets;
}

std::string format_percent(double fraction) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.1f", fraction * 100.0);
  return buffer;
}

std::vector<MetricRecord> evaluate(std::span<const EvalItem> items, TaskKind task, CerAveraging averaging) {
  std::vector<MetricRecord> records;
  const auto prf = sentence_prf(items);
  const auto counts = "tp=" + std::to_string(prf.tp) + " fp=" + std::to_string(prf.fp) +
                      " fn=" + std::to_string(prf.fn);
  records.push_back({"precision", prf.precision * 100.0, counts});
  records.push_back({"recall", prf.recall * 100.0, counts});
  records.push_back({"F1", prf.f1 * 100.0, counts});
  const bool has_references = std::all_of(items.begin(), items.end(),
                                          [](const EvalItem& item) { return !item.reference.empty(); });
  if (has_references && !items.empty()) {
    const auto c = cer(items, averaging);
    records.push_back({averaging == CerAveraging::Pooled ? "CER" : "CER_macro", c.cer * 100.0,
                       "edits=" + std::to_string(c.total_edits) + " ref_chars=" + std::to_string(c.total_ref_chars)});
  }
  const auto length_ok = length_accuracy(items, task);
  records.push_back({"length_accuracy",
                     items.empty() ? 0.0 : 100.0 * static_cast<double>(length_ok) / static_cast<double>(items.size()),
                     "ok=" + std::to_string(length_ok) + " sents=" + std::to_string(items.size())});
  return records;
}

void write_report(std::ostream& out, std::span<const MetricRecord> records) {
  for (const auto& r : records) {
    out << r.name << " = " << format_percent(r.value / 100.0);
    if (!r.counts.empty()) out << "  (" << r.counts << ")";
    out << '\n';
  }
}

void write_table(std::ostream& out, std::span<const MetricRecord> records) {
  for (std::size_t i = 0; i < records.size(); ++i) out << (i ? "\t" : "") << records[i].name;
  out << '\n';
  for (std::size_t i = 0; i < records.size(); ++i) out << (i ? "\t" : "") << format_percent(records[i].value / 100.0);
  out << '\n';
}

}  // namespace rair
