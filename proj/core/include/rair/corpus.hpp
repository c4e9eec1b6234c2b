#pragma once

#include "rair/llm.hpp"
#include "rair/task.hpp"
#include "rair/templates.hpp"

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rair {

enum class DocOrigin { TrainTarget, TrainExpansion, TermExplanation, Background };

std::string_view to_string(DocOrigin origin);
DocOrigin parse_doc_origin(std::string_view name);

struct CorpusDoc {
  std::string doc_id;
  std::string text;
  DocOrigin origin = DocOrigin::TrainTarget;
  /// Term for TermExplanation docs, source id for Background docs.
  std::optional<std::string> meta;

  bool operator==(const CorpusDoc&) const = default;
};

/// Deduplicated retrieval corpus in insertion order. Immutable once built.
class Corpus {
 public:
  Corpus() = default;
  /// Throws DataError on empty text, duplicate text, or duplicate doc id.
  Corpus(std::string domain_tag, std::vector<CorpusDoc> docs);

  const std::vector<CorpusDoc>& docs() const noexcept { return docs_; }
  std::size_t size() const noexcept { return docs_.size(); }
  bool empty() const noexcept { return docs_.empty(); }
  const std::string& domain_tag() const noexcept { return domain_tag_; }

  const CorpusDoc& operator[](std::size_t i) const { return docs_[i]; }
  const CorpusDoc* find(std::string_view doc_id) const;
  /// Docs of one origin, in corpus order.
  std::vector<CorpusDoc> with_origin(DocOrigin origin) const;

  bool operator==(const Corpus& other) const {
    return domain_tag_ == other.domain_tag_ && docs_ == other.docs_;
  }

 private:
  std::string domain_tag_;
  std::vector<CorpusDoc> docs_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

/// One TrainTarget doc per distinct (NFC) target sentence, first occurrence wins.
std::vector<CorpusDoc> ingest_training_targets(std::span<const SentencePair> pairs);

/// Asks the backend to explain a domain term. Throws ExpansionError carrying
/// the term when the backend fails or replies with nothing.
CorpusDoc expand_term(const std::string& term, ChatBackend& llm,
                      const TemplateSet& templates = TemplateSet::builtin());

/// expand_term over a list with bounded concurrency; output keeps input order.
std::vector<CorpusDoc> expand_terms(std::span<const std::string> terms, ChatBackend& llm,
                                    std::size_t workers = 1,
                                    const TemplateSet& templates = TemplateSet::builtin());

/// Asks the backend for a paragraph grounded on `sentence` and splits it into
/// TrainExpansion docs. Throws ExpansionError on backend failure.
std::vector<CorpusDoc> expand_sentence(const std::string& sentence, ChatBackend& llm,
                                       const TemplateSet& templates = TemplateSet::builtin());

std::vector<CorpusDoc> expand_sentences(std::span<const std::string> sentences, ChatBackend& llm,
                                        std::size_t workers = 1,
                                        const TemplateSet& templates = TemplateSet::builtin());

/// Concatenates train, expansion and term docs, drops exact (NFC) duplicate
/// texts keeping the first, and renumbers doc ids.
Corpus build_corpus(std::span<const CorpusDoc> train_docs, std::span<const CorpusDoc> expansion_docs,
                    std::span<const CorpusDoc> term_docs, std::string domain_tag = {});

/// Background description for one test source when no training set exists.
/// Returns a single Background doc keyed to `source_id`, or nothing if the
/// backend fails.
std::vector<CorpusDoc> generate_background(const std::string& source_id, const std::string& source,
                                           ChatBackend& llm,
                                           const TemplateSet& templates = TemplateSet::builtin());

/// Per-source background docs. Never merged into a shared corpus.
class BackgroundStore {
 public:
  void put(const std::string& source_id, std::vector<CorpusDoc> docs);
  /// Empty when nothing is attached to `source_id`.
  std::span<const CorpusDoc> get(const std::string& source_id) const;
  bool contains(const std::string& source_id) const;
  std::size_t size() const noexcept { return docs_.size(); }

 private:
  std::map<std::string, std::vector<CorpusDoc>> docs_;
};

/// Line-delimited JSON: one {"doc_id","text","origin","meta"} record per doc.
/// Lines carrying a "_header" key are skipped on read.
void write_corpus(std::ostream& out, const Corpus& corpus);
Corpus read_corpus(std::istream& in, std::string domain_tag = {});

/// One term per line; blank lines ignored.
std::vector<std::string> read_terms(std::istream& in);

}  // namespace rair
