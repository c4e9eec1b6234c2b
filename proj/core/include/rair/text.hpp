#pragma once

// UTF-8 helpers. All lengths in this library are counts of Unicode scalar
// values after NFC normalization.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace rair {

/// NFC-normalizes UTF-8 text. Throws ArgumentError on malformed UTF-8.
std::string nfc(std::string_view utf8);

/// Decodes UTF-8 into scalar values without normalizing.
std::u32string decode_utf8(std::string_view utf8);

/// NFC-normalizes, then decodes.
std::u32string to_scalars(std::string_view utf8);

std::string encode_utf8(std::u32string_view scalars);
std::string encode_utf8(char32_t scalar);

/// Sentence length: number of scalar values after NFC. Punctuation and
/// whitespace count.
std::size_t length_of(std::string_view utf8);

/// Strips leading and trailing Unicode whitespace.
std::string trim(std::string_view utf8);

/// Splits a paragraph after each of 。！？ and newline. The delimiter stays
/// with the preceding fragment; fragments that are empty or consist only of
/// delimiters are dropped. A paragraph with no delimiter yields itself.
std::vector<std::string> split_sentences(std::string_view paragraph);

/// Joins with the full-width separator used between N-best candidates.
std::string join_candidates(const std::vector<std::string>& candidates);

inline constexpr std::string_view kCandidateSeparator = "｜";

}  // namespace rair
