#include "rair/text.hpp"

#include "rair/errors.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

namespace rair {
namespace {

const icu::Normalizer2& nfc_normalizer() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || normalizer == nullptr) {
    throw Error(std::string("ICU NFC normalizer unavailable: ") + u_errorName(status));
  }
  return *normalizer;
}

bool is_sentence_delimiter(char32_t c) {
  return c == U'。' || c == U'！' || c == U'？' || c == U'\n';
}

}  // namespace

std::u32string decode_utf8(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto length = static_cast<int32_t>(utf8.size());
  int32_t offset = 0;
  while (offset < length) {
    UChar32 c = 0;
    U8_NEXT(bytes, offset, length, c);
    if (c < 0) {
      throw ArgumentError("malformed UTF-8 at byte " + std::to_string(offset));
    }
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

std::string nfc(std::string_view utf8) {
  // Validate first: ICU silently substitutes U+FFFD for ill-formed input.
  decode_utf8(utf8);
  const auto& normalizer = nfc_normalizer();
  const auto source = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  UErrorCode status = U_ZERO_ERROR;
  if (normalizer.isNormalized(source, status) && U_SUCCESS(status)) {
    return std::string(utf8);
  }
  status = U_ZERO_ERROR;
  const auto normalized = normalizer.normalize(source, status);
  if (U_FAILURE(status)) {
    throw Error(std::string("NFC normalization failed: ") + u_errorName(status));
  }
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

std::u32string to_scalars(std::string_view utf8) { return decode_utf8(nfc(utf8)); }

std::string encode_utf8(char32_t scalar) {
  std::string out;
  if (scalar < 0x80) {
    out.push_back(static_cast<char>(scalar));
  } else if (scalar < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (scalar >> 6)));
    out.push_back(static_cast<char>(0x80 | (scalar & 0x3F)));
  } else if (scalar < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (scalar >> 12)));
    out.push_back(static_cast<char>(0x80 | ((scalar >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (scalar & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (scalar >> 18)));
    out.push_back(static_cast<char>(0x80 | ((scalar >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((scalar >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (scalar & 0x3F)));
  }
  return out;
}

std::string encode_utf8(std::u32string_view scalars) {
  std::string out;
  out.reserve(scalars.size() * 3);
  for (char32_t c : scalars) {
    out += encode_utf8(c);
  }
  return out;
}

std::size_t length_of(std::string_view utf8) { return to_scalars(utf8).size(); }

std::string trim(std::string_view utf8) {
  const auto scalars = decode_utf8(utf8);
  std::size_t begin = 0;
  std::size_t end = scalars.size();
  while (begin < end && u_isUWhiteSpace(static_cast<UChar32>(scalars[begin]))) {
    ++begin;
  }
  while (end > begin && u_isUWhiteSpace(static_cast<UChar32>(scalars[end - 1]))) {
    --end;
  }
  return encode_utf8(std::u32string_view(scalars).substr(begin, end - begin));
}

std::vector<std::string> split_sentences(std::string_view paragraph) {
  const auto scalars = decode_utf8(paragraph);
  std::vector<std::string> out;
  std::u32string current;
  auto flush = [&] {
    auto fragment = trim(encode_utf8(current));
    current.clear();
    const auto body = decode_utf8(fragment);
    bool has_content = false;
    for (char32_t c : body) {
      if (!is_sentence_delimiter(c)) {
        has_content = true;
        break;
      }
    }
    if (has_content) {
      out.push_back(std::move(fragment));
    }
  };
  for (char32_t c : scalars) {
    current.push_back(c);
    if (is_sentence_delimiter(c)) {
      flush();
    }
  }
  flush();
  return out;
}

std::string join_candidates(const std::vector<std::string>& candidates) {
  std::string out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (i > 0) {
      out += kCandidateSeparator;
    }
    out += candidates[i];
  }
  return out;
}

}  // namespace rair
