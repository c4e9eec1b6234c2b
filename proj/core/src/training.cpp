#include "rair/training.hpp"

#include "rair/errors.hpp"
#include "rair/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <unordered_set>

namespace rair {
namespace {

// Uniform integer in [0, bound) from raw engine output. std::uniform_int_distribution
// is implementation-defined, this is not.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

// -log(e^a / (e^a + sum_j e^{b_j})) with a = s+/tau, b_j = s-_j/tau.
double positive_term(double a, std::span<const double> b) {
  if (b.empty()) return 0.0;
  double max_gap = -std::numeric_limits<double>::infinity();
  for (double bj : b) max_gap = std::max(max_gap, bj - a);
  if (max_gap <= 0.0) {
    double sum = 0.0;
    for (double bj : b) sum += std::exp(bj - a);
    return std::log1p(sum);
  }
  double sum = std::exp(-max_gap);
  for (double bj : b) sum += std::exp(bj - a - max_gap);
  return max_gap + std::log(sum);
}

}  // namespace

RetrieverTrainingSample build_training_sample(const SentencePair& pair, const Retriever& base,
                                              const SampleOptions& options) {
  const auto errors = extract_error_chars(pair);
  if (errors.empty()) {
    throw ArgumentError("training sample needs a pair with at least one error (" + pair.id + ")");
  }
  const auto chars = corrected_chars(errors);

  RetrieverTrainingSample sample;
  sample.query = nfc(pair.source);
  const auto target = nfc(pair.target);
  sample.positives.push_back(target);
  std::unordered_set<std::string> used{sample.query, target};

  const auto& corpus = base.corpus();
  const auto ranked = corpus.empty() ? std::vector<RetrievedDoc>{}
                                     : base.retrieve(sample.query, std::max<std::size_t>(corpus.size(), 1));

  for (char32_t c : chars) {
    const char32_t single[] = {c};
    for (const auto& r : ranked) {
      if (!used.count(r.doc->text) && contains_any(r.doc->text, single)) {
        sample.positives.push_back(r.doc->text);
        used.insert(r.doc->text);
        break;
      }
    }
  }

  const auto hard_window = std::min(ranked.size(), 2 * options.n_neg);
  for (std::size_t i = 0; i < hard_window && sample.negatives.size() < options.n_neg; ++i) {
    const auto& text = ranked[i].doc->text;
    if (!used.count(text) && !contains_any(text, chars)) {
      sample.negatives.push_back(text);
      used.insert(text);
    }
  }

  if (sample.negatives.size() < options.n_neg) {
    std::vector<const std::string*> pool;
    for (const auto& doc : corpus.docs()) {
      if (!used.count(doc.text) && !contains_any(doc.text, chars)) pool.push_back(&doc.text);
    }
    std::mt19937_64 rng(options.seed ^ fnv1a(pair.id));
    const auto need = std::min(options.n_neg - sample.negatives.size(), pool.size());
    for (std::size_t i = 0; i < need; ++i) {
      const auto j = i + static_cast<std::size_t>(bounded(rng, pool.size() - i));
      std::swap(pool[i], pool[j]);
      sample.negatives.push_back(*pool[i]);
    }
  }
  sample.short_of_negatives = sample.negatives.size() < options.n_neg;
  return sample;
}

double contrastive_loss(std::span<const double> positive_sims, std::span<const double> negative_sims,
                        double tau) {
  if (!(tau > 0.0)) {
    throw ArgumentError("temperature must be positive");
  }
  if (positive_sims.empty()) {
    throw ArgumentError("contrastive loss needs at least one positive");
  }
  std::vector<double> scaled_negatives(negative_sims.size());
  std::transform(negative_sims.begin(), negative_sims.end(), scaled_negatives.begin(),
                 [tau](double s) { return s / tau; });
  double total = 0.0;
  for (double s : positive_sims) {
    total += positive_term(s / tau, scaled_negatives);
  }
  return std::max(0.0, total / static_cast<double>(positive_sims.size()));
}

double contrastive_loss(const EmbeddingVector& query, std::span<const EmbeddingVector> positives,
                        std::span<const EmbeddingVector> negatives, double tau) {
  std::vector<double> pos;
  std::vector<double> neg;
  for (const auto& p : positives) pos.push_back(cosine(query, p));
  for (const auto& n : negatives) neg.push_back(cosine(query, n));
  return contrastive_loss(pos, neg, tau);
}

void write_training_samples(std::ostream& out, std::span<const RetrieverTrainingSample> samples) {
  for (const auto& s : samples) {
    out << nlohmann::json{{"query", s.query}, {"pos", s.positives}, {"neg", s.negatives}}.dump() << '\n';
  }
}

std::vector<RetrieverTrainingSample> read_training_samples(std::istream& in) {
  std::vector<RetrieverTrainingSample> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto json = nlohmann::json::parse(line);
      if (json.contains("_header")) continue;
      RetrieverTrainingSample s;
      s.query = json.at("query").get<std::string>();
      s.positives = json.at("pos").get<std::vector<std::string>>();
      s.negatives = json.at("neg").get<std::vector<std::string>>();
      samples.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("malformed training sample: ") + e.what(), "line " + std::to_string(line_no));
    }
  }
  return samples;
}

}  // namespace rair
