#include "rair/corpus.hpp"

#include "rair/errors.hpp"
#include "rair/parallel.hpp"
#include "rair/text.hpp"

#include <json.hpp>

#include <istream>
#include <ostream>
#include <unordered_set>

namespace rair {

std::string_view to_string(DocOrigin origin) {
  switch (origin) {
    case DocOrigin::TrainTarget:
      return "train_target";
    case DocOrigin::TrainExpansion:
      return "train_expansion";
    case DocOrigin::TermExplanation:
      return "term_explanation";
    case DocOrigin::Background:
      return "background";
  }
  return "train_target";
}

DocOrigin parse_doc_origin(std::string_view name) {
  if (name == "train_target") return DocOrigin::TrainTarget;
  if (name == "train_expansion") return DocOrigin::TrainExpansion;
  if (name == "term_explanation") return DocOrigin::TermExplanation;
  if (name == "background") return DocOrigin::Background;
  throw DataError("unknown doc origin '" + std::string(name) + "'");
}

Corpus::Corpus(std::string domain_tag, std::vector<CorpusDoc> docs)
    : domain_tag_(std::move(domain_tag)), docs_(std::move(docs)) {
  std::unordered_set<std::string> texts;
  for (std::size_t i = 0; i < docs_.size(); ++i) {
    const auto& doc = docs_[i];
    if (doc.text.empty()) {
      throw DataError("corpus doc has empty text", doc.doc_id);
    }
    if (!texts.insert(doc.text).second) {
      throw DataError("duplicate corpus text", doc.doc_id);
    }
    if (!by_id_.emplace(doc.doc_id, i).second) {
      throw DataError("duplicate corpus doc id", doc.doc_id);
    }
  }
}

const CorpusDoc* Corpus::find(std::string_view doc_id) const {
  const auto it = by_id_.find(std::string(doc_id));
  return it == by_id_.end() ? nullptr : &docs_[it->second];
}

std::vector<CorpusDoc> Corpus::with_origin(DocOrigin origin) const {
  std::vector<CorpusDoc> out;
  for (const auto& doc : docs_) {
    if (doc.origin == origin) out.push_back(doc);
  }
  return out;
}

std::vector<CorpusDoc> ingest_training_targets(std::span<const SentencePair> pairs) {
  std::vector<CorpusDoc> out;
  std::unordered_set<std::string> seen;
  for (const auto& pair : pairs) {
    auto text = nfc(trim(pair.target));
    if (text.empty() || !seen.insert(text).second) {
      continue;
    }
    out.push_back({"train-" + std::to_string(out.size()), std::move(text), DocOrigin::TrainTarget, {}});
  }
  return out;
}

CorpusDoc expand_term(const std::string& term, ChatBackend& llm, const TemplateSet& templates) {
  if (term.empty()) {
    throw ArgumentError("term must be non-empty");
  }
  std::string reply;
  try {
    reply = chat(fill_placeholders(templates.expansion.term, {{"text", term}}), llm);
  } catch (const BackendError& e) {
    throw ExpansionError(std::string("term expansion failed: ") + e.what(), term);
  }
  return {"term-" + term, nfc(reply), DocOrigin::TermExplanation, term};
}

std::vector<CorpusDoc> expand_terms(std::span<const std::string> terms, ChatBackend& llm,
                                    std::size_t workers, const TemplateSet& templates) {
  return parallel_map(terms.size(), workers,
                      [&](std::size_t i) { return expand_term(terms[i], llm, templates); });
}

std::vector<CorpusDoc> expand_sentence(const std::string& sentence, ChatBackend& llm,
                                       const TemplateSet& templates) {
  if (sentence.empty()) {
    throw ArgumentError("sentence must be non-empty");
  }
  std::string paragraph;
  try {
    paragraph = chat(fill_placeholders(templates.expansion.sentence, {{"text", sentence}}), llm);
  } catch (const BackendError& e) {
    throw ExpansionError(std::string("sentence expansion failed: ") + e.what(), sentence);
  }
  std::vector<CorpusDoc> out;
  for (auto& piece : split_sentences(nfc(paragraph))) {
    out.push_back({"expansion-" + std::to_string(out.size()), std::move(piece),
                   DocOrigin::TrainExpansion, {}});
  }
  return out;
}

std::vector<CorpusDoc> expand_sentences(std::span<const std::string> sentences, ChatBackend& llm,
                                        std::size_t workers, const TemplateSet& templates) {
  auto per_sentence = parallel_map(sentences.size(), workers, [&](std::size_t i) {
    return expand_sentence(sentences[i], llm, templates);
  });
  std::vector<CorpusDoc> out;
  for (auto& docs : per_sentence) {
    for (auto& doc : docs) {
      doc.doc_id = "expansion-" + std::to_string(out.size());
      out.push_back(std::move(doc));
    }
  }
  return out;
}

Corpus build_corpus(std::span<const CorpusDoc> train_docs, std::span<const CorpusDoc> expansion_docs,
                    std::span<const CorpusDoc> term_docs, std::string domain_tag) {
  std::vector<CorpusDoc> docs;
  std::unordered_set<std::string> seen;
  for (const auto part : {train_docs, expansion_docs, term_docs}) {
    for (const auto& doc : part) {
      if (doc.origin == DocOrigin::Background) {
        throw ArgumentError("background docs are per-source and cannot enter the shared corpus");
      }
      auto text = nfc(doc.text);
      if (text.empty() || !seen.insert(text).second) {
        continue;
      }
      docs.push_back({"doc-" + std::to_string(docs.size()), std::move(text), doc.origin, doc.meta});
    }
  }
  return Corpus(std::move(domain_tag), std::move(docs));
}

std::vector<CorpusDoc> generate_background(const std::string& source_id, const std::string& source,
                                           ChatBackend& llm, const TemplateSet& templates) {
  if (source.empty()) {
    throw ArgumentError("background source must be non-empty");
  }
  try {
    auto paragraph = chat(fill_placeholders(templates.expansion.background, {{"text", source}}), llm);
    return {{"bg-" + source_id, nfc(paragraph), DocOrigin::Background, source_id}};
  } catch (const BackendError&) {
    return {};
  }
}

void BackgroundStore::put(const std::string& source_id, std::vector<CorpusDoc> docs) {
  docs_[source_id] = std::move(docs);
}

std::span<const CorpusDoc> BackgroundStore::get(const std::string& source_id) const {
  const auto it = docs_.find(source_id);
  if (it == docs_.end()) return {};
  return it->second;
}

bool BackgroundStore::contains(const std::string& source_id) const {
  return docs_.count(source_id) > 0;
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& doc : corpus.docs()) {
    nlohmann::json record = {
        {"doc_id", doc.doc_id},
        {"text", doc.text},
        {"origin", to_string(doc.origin)},
        {"meta", doc.meta ? nlohmann::json(*doc.meta) : nlohmann::json(nullptr)},
    };
    out << record.dump() << '\n';
  }
}

Corpus read_corpus(std::istream& in, std::string domain_tag) {
  std::vector<CorpusDoc> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto json = nlohmann::json::parse(line);
      if (json.contains("_header")) {
        if (domain_tag.empty() && json["_header"].contains("domain_tag")) {
          domain_tag = json["_header"]["domain_tag"].get<std::string>();
        }
        continue;
      }
      CorpusDoc doc;
      doc.doc_id = json.at("doc_id").get<std::string>();
      doc.text = json.at("text").get<std::string>();
      doc.origin = parse_doc_origin(json.at("origin").get<std::string>());
      if (json.contains("meta") && !json["meta"].is_null()) {
        doc.meta = json["meta"].get<std::string>();
      }
      docs.push_back(std::move(doc));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("malformed corpus record: ") + e.what(),
                      "line " + std::to_string(line_no));
    }
  }
  return Corpus(std::move(domain_tag), std::move(docs));
}

std::vector<std::string> read_terms(std::istream& in) {
  std::vector<std::string> terms;
  std::string line;
  while (std::getline(in, line)) {
    auto term = trim(line);
    if (!term.empty()) terms.push_back(std::move(term));
  }
  return terms;
}

}  // namespace rair
