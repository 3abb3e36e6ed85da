// SPDX-License-Identifier: Apache-2.0
#include "dqa/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dqa/error.hpp"
#include "dqa/text.hpp"

namespace dqa::corpus {
namespace {

constexpr std::array<std::string_view, 8> kAbbreviations = {
    "Dr.", "Mr.", "e.g.", "i.e.", "etc.", "vs.", "Fig.", "No.",
};

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

bool is_closer(char c) {
  return c == '"' || c == '\'' || c == ')' || c == ']' || c == '}';
}

bool starts_sentence(std::string_view body, std::size_t i) {
  // Allow an opening quote or bracket before the capital.
  while (i < body.size() && (body[i] == '"' || body[i] == '\'' ||
                             body[i] == '(' || body[i] == '[')) {
    ++i;
  }
  if (i >= body.size()) return false;
  const auto c = static_cast<unsigned char>(body[i]);
  return std::isupper(c) || std::isdigit(c);
}

bool is_abbreviation(std::string_view body, std::size_t period) {
  std::size_t b = period;
  while (b > 0 && !text::is_space(body[b - 1])) --b;
  std::string_view word = body.substr(b, period + 1 - b);
  while (!word.empty() && (word.front() == '(' || word.front() == '"')) {
    word.remove_prefix(1);
  }
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) !=
         kAbbreviations.end();
}

std::size_t skip_space(std::string_view s, std::size_t i) {
  while (i < s.size() && text::is_space(s[i])) ++i;
  return i;
}

std::size_t rtrim_end(std::string_view s, std::size_t begin, std::size_t end) {
  while (end > begin && text::is_space(s[end - 1])) --end;
  return end;
}

void push_sentence(std::vector<Sentence>& out, std::string_view body,
                   std::size_t begin, std::size_t end) {
  end = rtrim_end(body, begin, end);
  if (end <= begin) return;
  out.push_back({out.size(), std::string(body.substr(begin, end - begin)),
                 begin, end});
}

bool paragraph_break_after(std::string_view body, std::size_t end) {
  int newlines = 0;
  for (std::size_t i = end; i < body.size() && text::is_space(body[i]); ++i) {
    if (body[i] == '\n') ++newlines;
  }
  return newlines >= 2;
}

bool paragraph_break_before(std::string_view body, std::size_t begin) {
  if (begin == 0) return true;
  int newlines = 0;
  for (std::size_t i = begin; i > 0 && text::is_space(body[i - 1]); --i) {
    if (body[i - 1] == '\n') ++newlines;
  }
  return newlines >= 2;
}

// A standalone short line without terminal punctuation reads as a heading.
bool looks_like_heading(std::string_view body, const Sentence& s,
                        bool is_last) {
  if (is_last || s.text.size() > 80 || s.text.find('\n') != std::string::npos) {
    return false;
  }
  const char last = s.text.back();
  if (is_terminator(last) || last == ':' || last == ',' || last == ';') {
    return false;
  }
  return paragraph_break_before(body, s.char_start) &&
         paragraph_break_after(body, s.char_end);
}

std::vector<Section> find_sections(const Document& doc,
                                   const std::vector<std::string>& headings) {
  std::vector<std::size_t> heads;
  std::size_t next_md = 0;
  for (const auto& s : doc.sentences) {
    const bool md = next_md < headings.size() && s.text == headings[next_md];
    if (md) ++next_md;
    if (md || looks_like_heading(doc.body, s,
                                 s.index + 1 == doc.sentences.size())) {
      heads.push_back(s.index);
    }
  }
  std::vector<Section> out;
  for (std::size_t h = 0; h < heads.size(); ++h) {
    const std::size_t last =
        h + 1 < heads.size() ? heads[h + 1] - 1 : doc.sentences.size() - 1;
    out.push_back({heads[h], heads[h], last, doc.sentences[heads[h]].text});
  }
  return out;
}

std::string strip_inline(std::string_view line) {
  std::string out;
  out.reserve(line.size());
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    // ![alt](url) and [text](url)
    if (c == '[' || (c == '!' && i + 1 < line.size() && line[i + 1] == '[')) {
      const std::size_t open = c == '!' ? i + 1 : i;
      const std::size_t close = line.find(']', open);
      if (close != std::string_view::npos && close + 1 < line.size() &&
          line[close + 1] == '(') {
        const std::size_t paren = line.find(')', close);
        if (paren != std::string_view::npos) {
          out += strip_inline(line.substr(open + 1, close - open - 1));
          i = paren;
          continue;
        }
      }
    }
    if (c == '*' || c == '`') continue;
    if (c == '_' && i + 1 < line.size() && line[i + 1] == '_') {
      ++i;
      continue;
    }
    out.push_back(c);
  }
  return out;
}

bool is_rule_line(std::string_view t) {
  if (t.size() < 3) return false;
  return std::all_of(t.begin(), t.end(), [](char c) {
    return c == '-' || c == '=' || c == '*' || c == '_' || c == ' ';
  });
}

bool is_table_separator(std::string_view t) {
  return !t.empty() && t.find('|') != std::string_view::npos &&
         std::all_of(t.begin(), t.end(), [](char c) {
           return c == '|' || c == '-' || c == ':' || c == ' ';
         });
}

}  // namespace

std::string_view to_string(Category c) {
  switch (c) {
    case Category::Report: return "report";
    case Category::JobApplication: return "job_application";
    case Category::ServiceDescription: return "service_description";
    case Category::GeneralDescription: return "general_description";
    case Category::Guidelines: return "guidelines";
    case Category::Policy: return "policy";
    case Category::Factsheet: return "factsheet";
  }
  return "report";
}

std::optional<Category> parse_category(std::string_view s) {
  for (auto c : {Category::Report, Category::JobApplication,
                 Category::ServiceDescription, Category::GeneralDescription,
                 Category::Guidelines, Category::Policy, Category::Factsheet}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

SourceFormat format_from_path(std::string_view path) {
  const auto lower = text::ascii_lower(path);
  auto ends_with = [&](std::string_view suffix) {
    return lower.size() >= suffix.size() &&
           lower.compare(lower.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  return ends_with(".md") || ends_with(".markdown") ? SourceFormat::Markdown
                                                    : SourceFormat::PlainText;
}

std::string strip_markdown(std::string_view markdown,
                           std::vector<std::string>* headings) {
  std::string out;
  std::istringstream in{std::string(markdown)};
  std::string raw;
  bool in_fence = false;
  auto paragraph = [&](const std::string& s) {
    out += "\n\n";
    out += s;
    out += "\n\n";
  };
  while (std::getline(in, raw)) {
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::string_view t = text::trim(line);
    if (t.substr(0, 3) == "```" || t.substr(0, 3) == "~~~") {
      in_fence = !in_fence;
      out += "\n";
      continue;
    }
    if (in_fence) {
      out += std::string(line) + "\n";
      continue;
    }
    if (t.empty()) {
      out += "\n";
      continue;
    }
    if (t.front() == '#') {
      std::size_t level = 0;
      while (level < t.size() && t[level] == '#') ++level;
      if (level <= 6 && (level == t.size() || t[level] == ' ')) {
        std::string_view h = text::trim(t.substr(level));
        while (!h.empty() && h.back() == '#') h.remove_suffix(1);
        const std::string heading{text::trim(strip_inline(text::trim(h)))};
        if (!heading.empty()) {
          if (headings) headings->push_back(heading);
          paragraph(heading);
        }
        continue;
      }
    }
    if (is_rule_line(t) || is_table_separator(t)) {
      out += "\n";
      continue;
    }
    std::string_view content = t;
    if (content.front() == '>') {
      content.remove_prefix(1);
      content = text::trim(content);
    }
    // List markers: -, *, +, 1., 1)
    bool list_item = false;
    if (content.size() >= 2 &&
        (content[0] == '-' || content[0] == '*' || content[0] == '+') &&
        content[1] == ' ') {
      content.remove_prefix(2);
      list_item = true;
    } else {
      std::size_t d = 0;
      while (d < content.size() && std::isdigit(static_cast<unsigned char>(content[d]))) ++d;
      if (d > 0 && d + 1 < content.size() &&
          (content[d] == '.' || content[d] == ')') && content[d + 1] == ' ') {
        content.remove_prefix(d + 2);
        list_item = true;
      }
    }
    std::string cleaned = strip_inline(text::trim(content));
    if (cleaned.find('|') != std::string::npos) {
      std::replace(cleaned.begin(), cleaned.end(), '|', ' ');
      cleaned = std::string(text::trim(cleaned));
    }
    if (list_item) {
      paragraph(cleaned);
    } else {
      out += cleaned + "\n";
    }
  }
  return out;
}

std::vector<Sentence> split_sentences(std::string_view body) {
  std::vector<Sentence> out;
  const std::size_t n = body.size();
  std::size_t start = skip_space(body, 0);
  std::size_t i = start;
  while (i < n) {
    const char c = body[i];
    if (c == '\n') {
      std::size_t j = i;
      int newlines = 0;
      while (j < n && text::is_space(body[j])) {
        if (body[j] == '\n') ++newlines;
        ++j;
      }
      if (newlines >= 2) {
        push_sentence(out, body, start, i);
        start = i = j;
        continue;
      }
      i = j;
      continue;
    }
    if (is_terminator(c)) {
      std::size_t k = i + 1;
      while (k < n && (is_terminator(body[k]) || is_closer(body[k]))) ++k;
      if (k < n && text::is_space(body[k])) {
        const std::size_t next = skip_space(body, k);
        const bool abbreviation = c == '.' && k == i + 1 && is_abbreviation(body, i);
        if (next < n && starts_sentence(body, next) && !abbreviation) {
          push_sentence(out, body, start, k);
          start = i = next;
          continue;
        }
      }
      i = k;
      continue;
    }
    ++i;
  }
  if (start < n) push_sentence(out, body, start, n);
  return out;
}

Document ingest(std::string_view raw_text, std::string_view title,
                SourceFormat format) {
  std::vector<std::string> headings;
  std::string source = format == SourceFormat::Markdown
                           ? strip_markdown(raw_text, &headings)
                           : std::string(raw_text);
  const std::string normalized = text::normalize_body(source);
  const std::string_view trimmed = text::trim(normalized);
  if (trimmed.empty()) {
    throw Error(ErrorCode::EmptyDocument, "document has no text");
  }
  Document doc;
  doc.title = std::string(title);
  doc.body = std::string(trimmed);
  doc.sentences = split_sentences(doc.body);
  if (doc.sentences.empty()) {
    throw Error(ErrorCode::EmptyDocument, "no sentence could be extracted");
  }
  for (auto& h : headings) h = text::normalize_body(h);
  doc.sections = find_sections(doc, headings);
  doc.id = "doc-" + text::fnv1a_hex(doc.title + '\x1f' + doc.body);
  return doc;
}

std::vector<Passage> build_passages(const Document& doc,
                                    std::size_t window_size,
                                    std::size_t stride) {
  if (window_size == 0 || stride == 0) {
    throw Error(ErrorCode::InvalidArgument,
                "window size and stride must be positive");
  }
  std::vector<Passage> out;
  const std::size_t count = doc.sentences.size();
  if (count == 0) return out;
  auto make = [&](std::size_t first, std::size_t last) {
    Passage p;
    p.doc_id = doc.id;
    p.index = out.size();
    p.sentence_start = first;
    p.sentence_end = last;
    p.char_start = doc.sentences[first].char_start;
    p.char_end = doc.sentences[last].char_end;
    p.text = doc.body.substr(p.char_start, p.char_end - p.char_start);
    out.push_back(std::move(p));
  };
  if (count <= window_size) {
    make(0, count - 1);
    return out;
  }
  for (std::size_t first = 0; first + window_size <= count; first += stride) {
    make(first, first + window_size - 1);
  }
  return out;
}

AnswerSpan make_span(const Document& doc, std::size_t char_start,
                     std::size_t char_end) {
  if (char_start >= char_end || char_end > doc.body.size()) {
    throw Error(ErrorCode::SpanOutOfRange,
                "span [" + std::to_string(char_start) + ", " +
                    std::to_string(char_end) + ") outside document " + doc.id);
  }
  return {doc.id, doc.body.substr(char_start, char_end - char_start),
          char_start, char_end};
}

std::size_t sentence_at(const Document& doc, std::size_t offset) {
  const auto& s = doc.sentences;
  // First sentence starting after offset; the one before owns the offset
  // (together with its trailing whitespace).
  auto it = std::upper_bound(s.begin(), s.end(), offset,
                             [](std::size_t off, const Sentence& x) {
                               return off < x.char_start;
                             });
  if (it == s.begin()) return std::string::npos;
  return static_cast<std::size_t>(std::distance(s.begin(), it)) - 1;
}

std::vector<Chunk> chunk_answer(const AnswerSpan& span, const Document& doc) {
  if (span.doc_id != doc.id) {
    throw Error(ErrorCode::DocumentMismatch,
                "span belongs to " + span.doc_id + ", not " + doc.id);
  }
  if (span.char_start > span.char_end || span.char_end > doc.body.size() ||
      doc.body.compare(span.char_start, span.char_end - span.char_start,
                       span.text) != 0) {
    throw Error(ErrorCode::SpanOutOfRange,
                "span offsets do not match document " + doc.id);
  }
  std::size_t begin = span.char_start;
  std::size_t end = span.char_end;
  while (begin < end && text::is_space(doc.body[begin])) ++begin;
  end = rtrim_end(doc.body, begin, end);
  std::vector<Chunk> out;
  if (begin >= end) return out;
  const auto& sents = doc.sentences;
  std::size_t first = sentence_at(doc, begin);
  if (first == std::string::npos) first = 0;
  for (std::size_t k = first; k < sents.size(); ++k) {
    const std::size_t ext_begin = sents[k].char_start;
    const std::size_t ext_end =
        k + 1 < sents.size() ? sents[k + 1].char_start : doc.body.size();
    if (ext_begin >= end) break;
    const std::size_t a = std::max(begin, ext_begin);
    const std::size_t b = std::min(end, ext_end);
    if (a >= b) continue;
    Chunk c;
    c.doc_id = doc.id;
    c.char_start = a;
    c.char_end = b;
    c.text = doc.body.substr(a, b - a);
    c.sentence_index = k;
    c.partial = a > sents[k].char_start || b < sents[k].char_end;
    out.push_back(std::move(c));
  }
  return out;
}

int score_passage(const Passage& passage, const std::vector<Chunk>& chunks) {
  int score = 0;
  for (const auto& c : chunks) {
    if (c.doc_id != passage.doc_id) {
      throw Error(ErrorCode::DocumentMismatch,
                  "chunk from " + c.doc_id + " scored against passage of " +
                      passage.doc_id);
    }
    if (passage.contains_sentence(c.sentence_index)) ++score;
  }
  return score;
}

void to_json(nlohmann::json& j, const Document& d) {
  j = nlohmann::json{{"id", d.id}, {"title", d.title}, {"body", d.body}};
  j["category"] = d.category ? nlohmann::json(std::string(to_string(*d.category)))
                             : nlohmann::json(nullptr);
  auto& sents = j["sentences"] = nlohmann::json::array();
  for (const auto& s : d.sentences) {
    sents.push_back({{"index", s.index},
                     {"char_start", s.char_start},
                     {"char_end", s.char_end},
                     {"text", s.text}});
  }
  auto& secs = j["sections"] = nlohmann::json::array();
  for (const auto& s : d.sections) {
    secs.push_back({{"title", s.title},
                    {"heading", s.heading},
                    {"first", s.first},
                    {"last", s.last}});
  }
}

void from_json(const nlohmann::json& j, Document& d) {
  d.id = j.at("id").get<std::string>();
  d.title = j.value("title", "");
  d.body = j.at("body").get<std::string>();
  d.category.reset();
  if (j.contains("category") && j["category"].is_string()) {
    d.category = parse_category(j["category"].get<std::string>());
  }
  d.sentences.clear();
  if (j.contains("sentences")) {
    for (const auto& s : j["sentences"]) {
      Sentence x;
      x.index = d.sentences.size();
      x.char_start = s.at("char_start").get<std::size_t>();
      x.char_end = s.at("char_end").get<std::size_t>();
      if (x.char_start >= x.char_end || x.char_end > d.body.size() ||
          (!d.sentences.empty() && x.char_start < d.sentences.back().char_end)) {
        throw Error(ErrorCode::ParseError,
                    "bad sentence offsets in document " + d.id);
      }
      x.text = d.body.substr(x.char_start, x.char_end - x.char_start);
      d.sentences.push_back(std::move(x));
    }
  } else {
    d.sentences = split_sentences(d.body);
  }
  d.sections.clear();
  if (j.contains("sections")) {
    for (const auto& s : j["sections"]) {
      Section x;
      x.title = s.value("title", "");
      x.heading = s.at("heading").get<std::size_t>();
      x.first = s.value("first", x.heading);
      x.last = s.at("last").get<std::size_t>();
      if (x.last >= d.sentences.size() || x.first > x.last) {
        throw Error(ErrorCode::ParseError, "bad section range in " + d.id);
      }
      d.sections.push_back(std::move(x));
    }
  }
}

void to_json(nlohmann::json& j, const Passage& p) {
  j = nlohmann::json{{"doc_id", p.doc_id},
                     {"index", p.index},
                     {"sentence_start", p.sentence_start},
                     {"sentence_end", p.sentence_end},
                     {"char_start", p.char_start},
                     {"char_end", p.char_end},
                     {"text", p.text}};
}

std::vector<Document> read_documents(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      docs.push_back(nlohmann::json::parse(line).get<Document>());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return docs;
}

void write_documents(const std::vector<Document>& docs, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  for (const auto& d : docs) out << nlohmann::json(d).dump() << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace dqa::corpus
