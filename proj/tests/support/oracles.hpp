#pragma once

// Independent reference implementations used only by tests. Nothing here
// calls into the library's algorithms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rair::testing {

/// Counts UTF-8 lead bytes (anything that is not 10xxxxxx).
inline std::size_t count_code_points(std::string_view utf8) {
  return static_cast<std::size_t>(std::count_if(utf8.begin(), utf8.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

/// Hand-rolled decoder for well-formed UTF-8.
inline std::u32string decode(std::string_view utf8) {
  std::u32string out;
  for (std::size_t i = 0; i < utf8.size();) {
    const auto b = static_cast<unsigned char>(utf8[i]);
    int extra = b < 0x80 ? 0 : b < 0xE0 ? 1 : b < 0xF0 ? 2 : 3;
    char32_t c = extra == 0 ? b : extra == 1 ? (b & 0x1F) : extra == 2 ? (b & 0x0F) : (b & 0x07);
    for (int k = 1; k <= extra; ++k) c = (c << 6) | (static_cast<unsigned char>(utf8[i + k]) & 0x3F);
    out.push_back(c);
    i += static_cast<std::size_t>(extra) + 1;
  }
  return out;
}

inline std::string encode(char32_t c) {
  std::string out;
  if (c < 0x80) {
    out += static_cast<char>(c);
  } else if (c < 0x800) {
    out += static_cast<char>(0xC0 | (c >> 6));
    out += static_cast<char>(0x80 | (c & 0x3F));
  } else {
    out += static_cast<char>(0xE0 | (c >> 12));
    out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (c & 0x3F));
  }
  return out;
}

/// Levenshtein straight from its recursive definition, without memoization.
inline std::size_t recursive_edit_distance(std::u32string_view a, std::u32string_view b) {
  if (a.empty()) return b.size();
  if (b.empty()) return a.size();
  if (a.front() == b.front()) return recursive_edit_distance(a.substr(1), b.substr(1));
  return 1 + std::min({recursive_edit_distance(a.substr(1), b), recursive_edit_distance(a, b.substr(1)),
                       recursive_edit_distance(a.substr(1), b.substr(1))});
}

/// Mixed ASCII / CJK / punctuation alphabet; every entry is NFC-stable.
inline const std::vector<char32_t>& mixed_alphabet() {
  static const std::vector<char32_t> alphabet = {U'a', U'b', U'z', U'7', U' ', U'天', U'气',
                                                 U'汽', U'很', U'好', U'即', U'期', U'。', U'，'};
  return alphabet;
}

inline std::string random_text(std::mt19937_64& rng, std::size_t max_len,
                               const std::vector<char32_t>& alphabet = mixed_alphabet(),
                               std::size_t min_len = 0) {
  const auto len = min_len + rng() % (max_len - min_len + 1);
  std::string out;
  for (std::size_t i = 0; i < len; ++i) out += encode(alphabet[rng() % alphabet.size()]);
  return out;
}

inline double direct_cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / (std::sqrt(aa) * std::sqrt(bb));
}

/// Indices of the k best rows by cosine, via a full stable sort.
inline std::vector<std::size_t> brute_force_top_k(const std::vector<std::vector<double>>& rows,
                                                  const std::vector<double>& query, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t i = 0; i < rows.size(); ++i) scored.emplace_back(direct_cosine(rows[i], query), i);
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < std::min(k, scored.size()); ++i) out.push_back(scored[i].second);
  return out;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(dim);
  for (auto& x : v) x = normal(rng);
  return v;
}

inline bool contains_scalar(std::string_view text, char32_t c) {
  const auto scalars = decode(text);
  return std::find(scalars.begin(), scalars.end(), c) != scalars.end();
}

}  // namespace rair::testing
