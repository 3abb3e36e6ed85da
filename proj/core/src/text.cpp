// SPDX-License-Identifier: Apache-2.0
#include "dqa/text.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <string>

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include "dqa/error.hpp"

namespace dqa {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyDocument: return "EmptyDocument";
    case ErrorCode::SpanOutOfRange: return "SpanOutOfRange";
    case ErrorCode::DocumentMismatch: return "DocumentMismatch";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::EmptyAfterFiltering: return "EmptyAfterFiltering";
    case ErrorCode::NoAnswerChunks: return "NoAnswerChunks";
    case ErrorCode::TooFewPairs: return "TooFewPairs";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::OffsetMismatch: return "OffsetMismatch";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotFound: return "NotFound";
  }
  return "Unknown";
}

}  // namespace dqa

namespace dqa::text {
namespace {

bool is_token_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c >= 0x80;
}

char lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

// Sorted for binary search.
constexpr std::array<std::string_view, 62> kStopwords = {
    "a",     "about", "after", "all",   "also",  "an",    "and",   "any",
    "are",   "as",    "at",    "be",    "been",  "but",   "by",    "can",
    "could", "did",   "do",    "does",  "for",   "from",  "had",   "has",
    "have",  "he",    "her",   "his",   "how",   "i",     "if",    "in",
    "into",  "is",    "it",    "its",   "me",    "more",  "my",    "no",
    "not",   "of",    "on",    "or",    "our",   "she",   "so",    "than",
    "that",  "the",   "their", "them",  "there", "these", "they",  "this",
    "to",    "was",   "we",    "were",  "what",  "which",
};

}  // namespace

std::vector<TokenSpan> tokenize_with_offsets(std::string_view text) {
  std::vector<TokenSpan> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && !is_token_byte(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= n) break;
    const std::size_t start = i;
    std::string token;
    while (i < n && is_token_byte(static_cast<unsigned char>(text[i]))) {
      token.push_back(lower(text[i]));
      ++i;
    }
    out.push_back({std::move(token), start, i});
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenize_with_offsets(text)) out.push_back(std::move(t.token));
  return out;
}

bool is_stopword(std::string_view token) {
  return std::binary_search(kStopwords.begin(), kStopwords.end(), token);
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = lower(c);
  return out;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::string_view trim_left(std::string_view s) {
  std::size_t b = 0;
  while (b < s.size() && is_space(s[b])) ++b;
  return s.substr(b);
}

std::string_view trim(std::string_view s) {
  s = trim_left(s);
  std::size_t e = s.size();
  while (e > 0 && is_space(s[e - 1])) --e;
  return s.substr(0, e);
}

std::string normalize_body(std::string_view raw) {
  if (raw.size() >= 3 && raw.substr(0, 3) == "\xEF\xBB\xBF") raw.remove_prefix(3);
  std::string lf;
  lf.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '\r') {
      lf.push_back('\n');
      if (i + 1 < raw.size() && raw[i + 1] == '\n') ++i;
    } else {
      lf.push_back(raw[i]);
    }
  }
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::IoError, "ICU NFC normalizer unavailable");
  }
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(lf);
  icu::UnicodeString normalized = nfc->normalize(u, status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::ParseError, "unicode normalization failed");
  }
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

std::size_t codepoint_offset(std::string_view s, std::size_t byte_offset) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < byte_offset && i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) ++count;
  }
  return count;
}

std::size_t byte_offset(std::string_view s, std::size_t codepoint_index) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
      if (count == codepoint_index) return i;
      ++count;
    }
  }
  return count == codepoint_index ? s.size() : std::string_view::npos;
}

std::size_t codepoint_length(std::string_view s) {
  return codepoint_offset(s, s.size());
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf, 16);
}

}  // namespace dqa::text
