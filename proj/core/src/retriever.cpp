#include "rair/retriever.hpp"

#include "rair/errors.hpp"
#include "rair/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>

namespace rair {

void VectorIndex::add(std::string doc_id, EmbeddingVector vector) {
  if (dim_ == 0) {
    dim_ = vector.dim();
  }
  if (vector.dim() != dim_) {
    throw ArgumentError("vector dim " + std::to_string(vector.dim()) + " does not match index dim " +
                        std::to_string(dim_) + " for doc " + doc_id);
  }
  const double norm = vector.norm();
  if (!(norm > 0.0)) {
    throw ArgumentError("zero vector rejected for doc " + doc_id);
  }
  ids_.push_back(std::move(doc_id));
  vectors_.push_back(std::move(vector));
  norms_.push_back(norm);
}

std::vector<SearchHit> VectorIndex::search(const EmbeddingVector& query, std::size_t k) const {
  if (k == 0) {
    throw ArgumentError("search k must be at least 1");
  }
  if (empty()) {
    return {};
  }
  if (query.dim() != dim_) {
    throw ArgumentError("query dim " + std::to_string(query.dim()) + " does not match index dim " +
                        std::to_string(dim_));
  }
  const double query_norm = query.norm();
  if (!(query_norm > 0.0)) {
    throw ArgumentError("zero query vector");
  }
  std::vector<double> scores(size());
  for (std::size_t i = 0; i < size(); ++i) {
    scores[i] = std::clamp(dot(query, vectors_[i]) / (query_norm * norms_[i]), -1.0, 1.0);
  }
  std::vector<std::size_t> order(size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto take = std::min(k, size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return a < b;
                    });
  std::vector<SearchHit> hits;
  hits.reserve(take);
  for (std::size_t r = 0; r < take; ++r) {
    const auto i = order[r];
    hits.push_back({ids_[i], scores[i], r + 1, i});
  }
  return hits;
}

VectorIndex build_index(const Corpus& corpus, EmbedBackend& embedder, std::size_t batch_size,
                        std::size_t workers) {
  std::vector<std::string> texts;
  texts.reserve(corpus.size());
  for (const auto& doc : corpus.docs()) texts.push_back(doc.text);
  auto vectors = embed_all(embedder, texts, batch_size, workers);
  VectorIndex index;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    index.add(corpus[i].doc_id, std::move(vectors[i]));
  }
  return index;
}

void write_index(std::ostream& out, const VectorIndex& index) {
  out << nlohmann::json{{"dim", index.dim()}, {"count", index.size()}}.dump() << '\n';
  for (std::size_t i = 0; i < index.size(); ++i) {
    const auto values = index.vector(i).values();
    nlohmann::json record = {{"doc_id", index.doc_id(i)},
                             {"vector", std::vector<double>(values.begin(), values.end())}};
    out << record.dump() << '\n';
  }
}

VectorIndex read_index(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> dim;
  std::size_t declared = 0;
  VectorIndex index;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto json = nlohmann::json::parse(line);
      if (json.contains("_header")) continue;
      if (!dim) {
        dim = json.at("dim").get<std::size_t>();
        declared = json.at("count").get<std::size_t>();
        index = VectorIndex(*dim);
        continue;
      }
      index.add(json.at("doc_id").get<std::string>(),
                EmbeddingVector(json.at("vector").get<std::vector<double>>()));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("malformed index record: ") + e.what(), "line " + std::to_string(line_no));
    } catch (const ArgumentError& e) {
      throw DataError(e.what(), "line " + std::to_string(line_no));
    }
  }
  if (!dim) {
    throw DataError("index file has no dim header");
  }
  if (index.size() != declared) {
    throw DataError("index header declares " + std::to_string(declared) + " entries, found " +
                    std::to_string(index.size()));
  }
  return index;
}

Retriever::Retriever(const Corpus& corpus, const VectorIndex& index, EmbedBackend& embedder)
    : corpus_(corpus), index_(index), embedder_(embedder) {
  docs_.reserve(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) {
    const auto* doc = corpus.find(index.doc_id(i));
    if (doc == nullptr) {
      throw DataError("index entry has no corpus doc", index.doc_id(i));
    }
    docs_.push_back(doc);
  }
}

std::vector<RetrievedDoc> Retriever::retrieve(const EmbeddingVector& query, std::size_t k) const {
  std::vector<RetrievedDoc> out;
  for (const auto& hit : index_.search(query, k)) {
    out.push_back({docs_[hit.position], hit.score, hit.rank});
  }
  return out;
}

std::vector<RetrievedDoc> Retriever::retrieve(const std::string& query, std::size_t k) const {
  if (index_.empty()) return {};
  return retrieve(embedder_.embed_one(query), k);
}

std::vector<ErrorChar> extract_error_chars(const SentencePair& pair) {
  if (pair.task != TaskKind::Spelling) {
    throw TaskError("error characters are only defined for spelling pairs (" + pair.id + ")");
  }
  const auto source = to_scalars(pair.source);
  const auto target = to_scalars(pair.target);
  if (source.size() != target.size()) {
    throw TaskError("spelling pair " + pair.id + " has unequal lengths");
  }
  std::vector<ErrorChar> errors;
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (source[i] != target[i]) {
      errors.push_back({i, source[i], target[i]});
    }
  }
  return errors;
}

std::vector<char32_t> corrected_chars(std::span<const ErrorChar> errors) {
  std::vector<char32_t> out;
  for (const auto& e : errors) {
    if (std::find(out.begin(), out.end(), e.correct) == out.end()) out.push_back(e.correct);
  }
  return out;
}

bool contains_any(std::string_view text, std::span<const char32_t> chars) {
  if (chars.empty()) return false;
  for (char32_t c : to_scalars(text)) {
    if (std::find(chars.begin(), chars.end(), c) != chars.end()) return true;
  }
  return false;
}

HitCount hit_at_k(std::span<const SentencePair> pairs, const Retriever& retriever, std::size_t k) {
  if (k == 0) {
    throw ArgumentError("hit@k needs k >= 1");
  }
  HitCount count;
  for (const auto& pair : pairs) {
    const auto errors = extract_error_chars(pair);
    if (errors.empty()) continue;
    count.total_errors += errors.size();
    const auto retrieved = retriever.retrieve(pair.source, k);
    std::vector<std::u32string> texts;
    for (const auto& r : retrieved) texts.push_back(to_scalars(r.doc->text));
    for (const auto& e : errors) {
      const bool hit = std::any_of(texts.begin(), texts.end(), [&](const std::u32string& t) {
        return t.find(e.correct) != std::u32string::npos;
      });
      if (hit) ++count.hits;
    }
  }
  return count;
}

MrrQuery spelling_mrr_query(const SentencePair& pair) {
  auto chars = corrected_chars(extract_error_chars(pair));
  return {pair.source, [chars = std::move(chars)](const CorpusDoc& doc) {
            return contains_any(doc.text, chars);
          }};
}

double mrr(std::span<const MrrQuery> queries, const Retriever& retriever, std::size_t k) {
  if (queries.empty()) {
    throw ArgumentError("MRR over an empty query list");
  }
  double sum = 0.0;
  for (const auto& query : queries) {
    for (const auto& r : retriever.retrieve(query.source, k)) {
      if (query.relevant(*r.doc)) {
        sum += 1.0 / static_cast<double>(r.rank);
        break;
      }
    }
  }
  return sum / static_cast<double>(queries.size());
}

}  // namespace rair
