#pragma once

// Test doubles built on the library's backend interfaces.

#include "rair/embedding.hpp"
#include "rair/errors.hpp"

#include <map>
#include <string>
#include <vector>

namespace rair::testing {

/// Looks texts up in a fixed table; unknown texts are an error.
class TableEmbedder : public EmbedBackend {
 public:
  explicit TableEmbedder(std::size_t dim) : dim_(dim) {}

  void set(const std::string& text, std::vector<double> values) { table_[text] = std::move(values); }

  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override {
    std::vector<EmbeddingVector> out;
    for (const auto& t : texts) {
      const auto it = table_.find(t);
      if (it == table_.end()) throw ArgumentError("no embedding for: " + t);
      out.emplace_back(it->second);
    }
    return out;
  }
  std::size_t dim() const override { return dim_; }

 private:
  std::size_t dim_;
  std::map<std::string, std::vector<double>> table_;
};

}  // namespace rair::testing
