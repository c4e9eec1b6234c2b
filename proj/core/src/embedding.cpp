#include "rair/embedding.hpp"

#include "rair/errors.hpp"
#include "rair/parallel.hpp"
#include "rair/text.hpp"

#include <algorithm>
#include <cmath>

namespace rair {

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t hash = seed;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

EmbeddingVector::EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw ArgumentError("embedding must have at least one dimension");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw ArgumentError("embedding has a non-finite entry");
    }
  }
}

double EmbeddingVector::norm() const {
  double sum = 0.0;
  for (double v : values_) sum += v * v;
  return std::sqrt(sum);
}

bool EmbeddingVector::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

double dot(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) {
    throw ArgumentError("embedding dims differ: " + std::to_string(a.dim()) + " vs " +
                        std::to_string(b.dim()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) sum += a[i] * b[i];
  return sum;
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  const double numerator = dot(a, b);
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) {
    throw ArgumentError("cosine of a zero vector is undefined");
  }
  return std::clamp(numerator / (na * nb), -1.0, 1.0);
}

EmbeddingVector EmbedBackend::embed_one(const std::string& text) {
  auto out = embed(std::span<const std::string>(&text, 1));
  if (out.size() != 1) {
    throw BackendError("embedding backend returned " + std::to_string(out.size()) +
                       " vectors for one text");
  }
  return std::move(out.front());
}

std::vector<EmbeddingVector> embed_all(EmbedBackend& backend, std::span<const std::string> texts,
                                       std::size_t batch_size, std::size_t workers) {
  if (batch_size == 0) {
    throw ArgumentError("batch size must be positive");
  }
  const std::size_t batches = (texts.size() + batch_size - 1) / batch_size;
  auto parts = parallel_map(batches, workers, [&](std::size_t b) {
    const auto begin = b * batch_size;
    const auto count = std::min(batch_size, texts.size() - begin);
    auto vectors = backend.embed(texts.subspan(begin, count));
    if (vectors.size() != count) {
      throw BackendError("embedding backend returned " + std::to_string(vectors.size()) +
                         " vectors for " + std::to_string(count) + " texts");
    }
    return vectors;
  });
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (auto& part : parts) {
    for (auto& v : part) out.push_back(std::move(v));
  }
  return out;
}

HashingEmbedder::HashingEmbedder(std::size_t dim, double bigram_weight)
    : dim_(dim), bigram_weight_(bigram_weight) {
  if (dim_ == 0) {
    throw ArgumentError("embedding dim must be positive");
  }
}

EmbeddingVector HashingEmbedder::encode(const std::string& text) const {
  std::vector<double> values(dim_, 0.0);
  const auto scalars = to_scalars(text);
  auto add = [&](std::string_view feature, double weight) {
    const auto h = fnv1a(feature);
    const double sign = (h >> 63) != 0 ? -1.0 : 1.0;
    values[h % dim_] += sign * weight;
  };
  for (std::size_t i = 0; i < scalars.size(); ++i) {
    add("u" + encode_utf8(scalars[i]), 1.0);
    if (i + 1 < scalars.size() && bigram_weight_ != 0.0) {
      add("b" + encode_utf8(std::u32string_view(scalars).substr(i, 2)), bigram_weight_);
    }
  }
  double norm = 0.0;
  for (double v : values) norm += v * v;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (double& v : values) v /= norm;
  }
  return EmbeddingVector(std::move(values));
}

std::vector<EmbeddingVector> HashingEmbedder::embed(std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& text : texts) out.push_back(encode(text));
  return out;
}

}  // namespace rair
