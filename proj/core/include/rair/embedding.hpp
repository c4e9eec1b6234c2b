#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rair {

/// Dense embedding with finite entries.
class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  /// Throws ArgumentError on an empty vector or a non-finite entry.
  explicit EmbeddingVector(std::vector<double> values);

  std::size_t dim() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double norm() const;
  bool is_zero() const;

  bool operator==(const EmbeddingVector&) const = default;

 private:
  std::vector<double> values_;
};

double dot(const EmbeddingVector& a, const EmbeddingVector& b);

/// dot(a,b) / (|a| |b|), clamped to [-1, 1]. Throws ArgumentError on
/// mismatched dims or a zero vector.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

/// Sentence encoder. Output order matches input order; implementations must
/// be callable from several threads.
class EmbedBackend {
 public:
  virtual ~EmbedBackend() = default;
  virtual std::vector<EmbeddingVector> embed(std::span<const std::string> texts) = 0;
  virtual std::size_t dim() const = 0;

  EmbeddingVector embed_one(const std::string& text);
};

/// Splits `texts` into batches of `batch_size`, embeds up to `workers` batches
/// at a time, and reassembles results in input order.
std::vector<EmbeddingVector> embed_all(EmbedBackend& backend, std::span<const std::string> texts,
                                       std::size_t batch_size = 64, std::size_t workers = 1);

/// Deterministic offline encoder: signed feature hashing of character
/// unigrams and bigrams (FNV-1a), L2-normalized. A lexical stand-in for an
/// untuned dense retriever.
class HashingEmbedder : public EmbedBackend {
 public:
  explicit HashingEmbedder(std::size_t dim = 256, double bigram_weight = 1.0);

  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override;
  std::size_t dim() const override { return dim_; }

 private:
  EmbeddingVector encode(const std::string& text) const;

  std::size_t dim_;
  double bigram_weight_;
};

struct EmbedBackendConfig {
  /// Base URL of the embedding service; requests go to <url>/embed unless the
  /// URL already ends in /embed.
  std::string endpoint;
  double timeout_seconds = 60.0;
  std::size_t max_retries = 3;
};

/// Client for POST /embed {"texts": [...]} -> {"embeddings": [[...]], "dim": n}.
class HttpEmbedBackend : public EmbedBackend {
 public:
  explicit HttpEmbedBackend(EmbedBackendConfig config);

  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override;
  /// Dimension reported by the service; probes it with one request on first use.
  std::size_t dim() const override;

 private:
  std::vector<EmbeddingVector> request(std::span<const std::string> texts) const;
  std::vector<EmbeddingVector> with_retries(std::span<const std::string> texts) const;

  EmbedBackendConfig config_;
  mutable std::atomic<std::size_t> dim_{0};
};

/// 64-bit FNV-1a. Stable across platforms; used for hashing features and
/// deriving per-item seeds.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace rair
