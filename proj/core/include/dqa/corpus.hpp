// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace dqa::corpus {

/// Work-document categories used when selecting documents.
enum class Category {
  Report,
  JobApplication,
  ServiceDescription,
  GeneralDescription,
  Guidelines,
  Policy,
  Factsheet,
};

std::string_view to_string(Category c);
std::optional<Category> parse_category(std::string_view s);

struct Sentence {
  std::size_t index = 0;
  std::string text;
  std::size_t char_start = 0;  ///< byte offset into Document::body
  std::size_t char_end = 0;    ///< exclusive

  bool operator==(const Sentence&) const = default;
};

/// A heading sentence and the body sentences that follow it up to the next
/// heading. Only populated when the ingester recognised headings.
struct Section {
  std::size_t heading = 0;    ///< sentence index of the heading
  std::size_t first = 0;      ///< first sentence of the section (== heading)
  std::size_t last = 0;       ///< inclusive
  std::string title;

  bool operator==(const Section&) const = default;
};

struct Document {
  std::string id;
  std::string title;
  std::string body;  ///< NFC, LF line endings, trimmed
  std::vector<Sentence> sentences;
  std::vector<Section> sections;
  std::optional<Category> category;

  bool operator==(const Document&) const = default;
};

struct Passage {
  std::string doc_id;
  std::size_t index = 0;           ///< passage ordinal within the document
  std::size_t sentence_start = 0;  ///< inclusive
  std::size_t sentence_end = 0;    ///< inclusive
  std::size_t char_start = 0;      ///< byte range of text inside the body
  std::size_t char_end = 0;
  std::string text;

  bool contains_sentence(std::size_t s) const {
    return s >= sentence_start && s <= sentence_end;
  }
  bool operator==(const Passage&) const = default;
};

inline constexpr std::size_t kMaxSpanChars = 700;

struct AnswerSpan {
  std::string doc_id;
  std::string text;
  std::size_t char_start = 0;
  std::size_t char_end = 0;

  bool operator==(const AnswerSpan&) const = default;
};

struct Chunk {
  std::string doc_id;
  std::string text;
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  std::size_t sentence_index = 0;
  bool partial = false;  ///< covers only part of its sentence

  bool operator==(const Chunk&) const = default;
};

enum class SourceFormat { PlainText, Markdown };

/// Guesses the format from a file name (.md / .markdown are markdown).
SourceFormat format_from_path(std::string_view path);

/// Removes markdown markup. Headings become standalone paragraphs so they
/// segment into their own sentences; `headings` receives their text in order.
std::string strip_markdown(std::string_view markdown,
                           std::vector<std::string>* headings = nullptr);

/// Normalizes and segments a document. Throws Error(EmptyDocument).
Document ingest(std::string_view raw_text, std::string_view title,
                SourceFormat format = SourceFormat::PlainText);

/// Rule-based segmentation: a sentence ends at . ! or ? (plus closing quotes
/// or brackets) followed by whitespace and an uppercase letter or digit,
/// unless the word is a known abbreviation; blank lines always end one.
std::vector<Sentence> split_sentences(std::string_view body);

inline constexpr std::size_t kDefaultWindow = 5;

/// Sliding sentence windows. Documents shorter than the window produce one
/// clamped passage. Throws Error(InvalidArgument) for zero window or stride.
std::vector<Passage> build_passages(const Document& doc,
                                    std::size_t window_size = kDefaultWindow,
                                    std::size_t stride = 1);

/// Makes a span from body offsets, validating the range.
AnswerSpan make_span(const Document& doc, std::size_t char_start,
                     std::size_t char_end);

/// Splits a span into per-sentence chunks; the span is first trimmed of
/// surrounding whitespace. Chunks own the whitespace that trails their
/// sentence, so concatenating them reproduces the trimmed span exactly.
std::vector<Chunk> chunk_answer(const AnswerSpan& span, const Document& doc);

/// Number of chunks whose sentence lies inside the passage.
/// Throws Error(DocumentMismatch) if a chunk belongs to another document.
int score_passage(const Passage& passage, const std::vector<Chunk>& chunks);

/// Sentence index containing the byte offset, or npos when it falls in
/// inter-sentence whitespace past the last sentence.
std::size_t sentence_at(const Document& doc, std::size_t offset);

void to_json(nlohmann::json& j, const Document& d);
void from_json(const nlohmann::json& j, Document& d);
void to_json(nlohmann::json& j, const Passage& p);

/// Documents as JSONL, one Document JSON object per line.
std::vector<Document> read_documents(const std::string& path);
void write_documents(const std::vector<Document>& docs, const std::string& path);

}  // namespace dqa::corpus
