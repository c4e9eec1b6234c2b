#pragma once

#include "rair/corpus.hpp"
#include "rair/embedding.hpp"
#include "rair/retriever.hpp"
#include "rair/task.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace rair {

/// Query (erroneous source) with positive and negative sentences for
/// contrastive fine-tuning of the retriever.
struct RetrieverTrainingSample {
  std::string query;
  std::vector<std::string> positives;
  std::vector<std::string> negatives;
  /// Fewer negatives than requested were available.
  bool short_of_negatives = false;
};

struct SampleOptions {
  std::size_t n_neg = 5;
  std::uint64_t seed = 0;
};

/// Positives: the target, then per distinct corrected character the
/// best-scoring corpus doc containing it. Negatives: best-scoring docs among
/// the top 2*n_neg that contain no corrected character, padded with random
/// corpus docs that also contain none. The random draw is seeded from
/// options.seed and the pair id, so samples do not depend on call order.
RetrieverTrainingSample build_training_sample(const SentencePair& pair, const Retriever& base,
                                              const SampleOptions& options);

/// Mean over positives of -log(e^{s+/t} / (e^{s+/t} + sum_j e^{s-_j/t})),
/// given precomputed cosine similarities. Throws ArgumentError when tau <= 0
/// or there are no positives.
double contrastive_loss(std::span<const double> positive_sims, std::span<const double> negative_sims,
                        double tau);

double contrastive_loss(const EmbeddingVector& query, std::span<const EmbeddingVector> positives,
                        std::span<const EmbeddingVector> negatives, double tau);

/// {"query": ..., "pos": [...], "neg": [...]} per line.
void write_training_samples(std::ostream& out, std::span<const RetrieverTrainingSample> samples);
std::vector<RetrieverTrainingSample> read_training_samples(std::istream& in);

}  // namespace rair
