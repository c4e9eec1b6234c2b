#pragma once

#include "rair/corpus.hpp"
#include "rair/embedding.hpp"
#include "rair/task.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rair {

struct SearchHit {
  std::string doc_id;
  double score = 0.0;
  std::size_t rank = 0;  // 1-based
  /// Insertion position in the index (the tie-breaker).
  std::size_t position = 0;
};

/// Exhaustive cosine index. Entries keep insertion order; all share one dim.
class VectorIndex {
 public:
  explicit VectorIndex(std::size_t dim = 0) : dim_(dim) {}

  /// Throws ArgumentError on a zero vector or a dim mismatch. The first
  /// insert fixes the dim of an index created with dim 0.
  void add(std::string doc_id, EmbeddingVector vector);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  const std::string& doc_id(std::size_t i) const { return ids_[i]; }
  const EmbeddingVector& vector(std::size_t i) const { return vectors_[i]; }

  /// Top min(k, size) hits by descending cosine; equal scores keep insertion
  /// order. Empty index yields no hits.
  std::vector<SearchHit> search(const EmbeddingVector& query, std::size_t k) const;

 private:
  std::size_t dim_;
  std::vector<std::string> ids_;
  std::vector<EmbeddingVector> vectors_;
  std::vector<double> norms_;
};

inline std::vector<SearchHit> search(const VectorIndex& index, const EmbeddingVector& query,
                                     std::size_t k) {
  return index.search(query, k);
}

VectorIndex build_index(const Corpus& corpus, EmbedBackend& embedder, std::size_t batch_size = 64,
                        std::size_t workers = 1);

/// JSONL: {"dim": n, "count": c} header, then {"doc_id": ..., "vector": [...]}.
void write_index(std::ostream& out, const VectorIndex& index);
VectorIndex read_index(std::istream& in);

struct RetrievedDoc {
  const CorpusDoc* doc = nullptr;
  double score = 0.0;
  std::size_t rank = 0;
};

/// A corpus, its index and the encoder that produced it. Read-only; safe to share.
class Retriever {
 public:
  /// Throws DataError when an index entry has no corpus doc.
  Retriever(const Corpus& corpus, const VectorIndex& index, EmbedBackend& embedder);

  std::vector<RetrievedDoc> retrieve(const std::string& query, std::size_t k) const;
  std::vector<RetrievedDoc> retrieve(const EmbeddingVector& query, std::size_t k) const;

  const Corpus& corpus() const noexcept { return corpus_; }
  const VectorIndex& index() const noexcept { return index_; }
  EmbedBackend& embedder() const noexcept { return embedder_; }

 private:
  const Corpus& corpus_;
  const VectorIndex& index_;
  EmbedBackend& embedder_;
  std::vector<const CorpusDoc*> docs_;  // parallel to index entries
};

struct ErrorChar {
  std::size_t position = 0;
  char32_t wrong = 0;
  char32_t correct = 0;

  bool operator==(const ErrorChar&) const = default;
};

/// Differing positions of an equal-length spelling pair, in order. Throws
/// TaskError for non-spelling pairs or unequal lengths.
std::vector<ErrorChar> extract_error_chars(const SentencePair& pair);

/// Distinct corrected characters in order of first appearance.
std::vector<char32_t> corrected_chars(std::span<const ErrorChar> errors);

/// True if `text` contains any of `chars`.
bool contains_any(std::string_view text, std::span<const char32_t> chars);

struct HitCount {
  std::size_t hits = 0;
  std::size_t total_errors = 0;

  double rate() const { return total_errors == 0 ? 0.0 : static_cast<double>(hits) / total_errors; }
};

/// Counts error characters whose correct form occurs in one of the top-k
/// docs retrieved for the pair's source.
HitCount hit_at_k(std::span<const SentencePair> pairs, const Retriever& retriever, std::size_t k);

struct MrrQuery {
  std::string source;
  std::function<bool(const CorpusDoc&)> relevant;
};

/// Relevance for a spelling pair: the doc contains a corrected character.
MrrQuery spelling_mrr_query(const SentencePair& pair);

/// Mean of 1/rank of the first relevant hit within top-k (0 when none).
/// Throws ArgumentError on an empty query list.
double mrr(std::span<const MrrQuery> queries, const Retriever& retriever, std::size_t k);

}  // namespace rair
