// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace dqa::text {

/// Lowercases, splits on anything that is not an ASCII letter or digit.
/// Bytes >= 0x80 are kept inside tokens so UTF-8 words are not torn apart.
/// No stemming and no stopword removal.
std::vector<std::string> tokenize(std::string_view text);

struct TokenSpan {
  std::string token;
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// tokenize() with byte offsets into the input.
std::vector<TokenSpan> tokenize_with_offsets(std::string_view text);

/// English function words dropped by the extractive selector only.
bool is_stopword(std::string_view token);

std::string ascii_lower(std::string_view s);
std::string_view trim(std::string_view s);
std::string_view trim_left(std::string_view s);
bool is_space(char c);

/// Unicode NFC, CRLF/CR to LF, leading BOM removed.
std::string normalize_body(std::string_view raw);

/// Number of code points in the UTF-8 prefix s[0, byte_offset).
std::size_t codepoint_offset(std::string_view s, std::size_t byte_offset);

/// Byte offset of the code point with the given index; npos if out of range.
std::size_t byte_offset(std::string_view s, std::size_t codepoint_index);

/// Number of code points in a UTF-8 string.
std::size_t codepoint_length(std::string_view s);

/// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view data);

}  // namespace dqa::text
