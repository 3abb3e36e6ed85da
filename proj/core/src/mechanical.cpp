// SPDX-License-Identifier: Apache-2.0
// Rule-based handler for directives: find/highlight text, go to or read a
// section. Anything else is reported as unsupported.
#include <algorithm>
#include <array>
#include <cctype>
#include <regex>

#include "dqa/assistant.hpp"
#include "dqa/text.hpp"

namespace dqa::assistant {
namespace {

constexpr std::array<std::string_view, 7> kFindVerbs = {
    "search for", "look for", "find", "highlight", "search", "locate", "underline"};
constexpr std::array<std::string_view, 10> kNavVerbs = {
    "navigate to", "bring me to", "take me to", "jump to", "skip to",
    "scroll to",   "go to",       "show me",    "read",    "open"};

// Text between the first pair of matching quotes, if any.
std::optional<std::string> quoted(std::string_view q) {
  static const std::array<std::pair<std::string_view, std::string_view>, 5> pairs = {{
      {"``", "''"}, {"\xe2\x80\x9c", "\xe2\x80\x9d"}, {"\xe2\x80\x98", "\xe2\x80\x99"},
      {"\"", "\""}, {"'", "'"}}};
  for (const auto& [open, close] : pairs) {
    const auto a = q.find(open);
    if (a == std::string_view::npos) continue;
    const auto b = q.find(close, a + open.size());
    if (b == std::string_view::npos) continue;
    std::string inner(text::trim(q.substr(a + open.size(), b - a - open.size())));
    if (!inner.empty()) return inner;
  }
  return std::nullopt;
}

// Lowercase, non-alphanumerics collapsed to single spaces.
std::string simplify(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c >= 0x80) {
      if (pending_space && !out.empty()) out += ' ';
      pending_space = false;
      out += static_cast<char>(std::tolower(c));
    } else {
      pending_space = true;
    }
  }
  return out;
}

std::optional<std::string_view> after_verb(std::string_view lower, std::string_view verb) {
  if (!lower.starts_with(verb)) return std::nullopt;
  std::string_view rest = lower.substr(verb.size());
  if (!rest.empty() && std::isalnum(static_cast<unsigned char>(rest.front()))) return std::nullopt;
  return rest;
}

std::size_t first_passage_with(const corpus::Document& doc, std::size_t sentence) {
  const std::size_t w = corpus::kDefaultWindow;
  const std::size_t count = doc.sentences.size() >= w ? doc.sentences.size() - w + 1 : 1;
  const std::size_t p = sentence + 1 >= w ? sentence + 1 - w : 0;
  return std::min(p, count - 1);
}

AnswerResponse abstain(Reason why, std::string message) {
  AnswerResponse r;
  r.question_type.l1 = taxonomy::L1::Mechanical;
  r.handler = Handler::Mechanical;
  r.abstained = true;
  r.reason = why;
  r.answer_text = std::move(message);
  return r;
}

AnswerResponse find_text(const std::string& needle_raw, const corpus::Document& doc) {
  const std::string needle = text::ascii_lower(needle_raw);
  if (needle.empty()) return abstain(Reason::UnsupportedCommand, "Nothing to search for.");
  AnswerResponse r;
  r.question_type.l1 = taxonomy::L1::Mechanical;
  r.handler = Handler::Mechanical;
  for (const auto& s : doc.sentences) {
    if (text::ascii_lower(s.text).find(needle) == std::string::npos) continue;
    r.evidence.push_back(
        make_evidence(doc, first_passage_with(doc, s.index), s.char_start, s.char_end));
    if (!r.answer_text.empty()) r.answer_text += '\n';
    r.answer_text += s.text;
  }
  if (r.evidence.empty()) {
    return abstain(Reason::NotFound, "\"" + needle_raw + "\" does not occur in the document.");
  }
  return r;
}

const corpus::Section* find_section(std::string_view target, const corpus::Document& doc) {
  static const std::regex numbered(R"(^(?:section|chapter|part) (\d+)$)");
  const std::string t = simplify(target);
  if (t.empty() || doc.sections.empty()) return nullptr;
  std::smatch m;
  if (std::regex_match(t, m, numbered)) {
    const auto n = std::stoul(m[1].str());
    for (const auto& s : doc.sections) {
      // Headings that carry their own number win over ordinal position.
      if (simplify(s.title).starts_with(m[1].str() + " ")) return &s;
    }
    if (n >= 1 && n <= doc.sections.size()) return &doc.sections[n - 1];
    return nullptr;
  }
  for (const auto& s : doc.sections) {
    if (simplify(s.title) == t) return &s;
  }
  for (const auto& s : doc.sections) {
    const std::string h = simplify(s.title);
    if (!h.empty() && (h.find(t) != std::string::npos || t.find(h) != std::string::npos)) {
      return &s;
    }
  }
  return nullptr;
}

AnswerResponse goto_section(std::string_view target_raw, const corpus::Document& doc) {
  std::string target(text::trim(target_raw));
  if (target.starts_with("the ")) target.erase(0, 4);
  const corpus::Section* sec = find_section(target, doc);
  if (sec == nullptr) {
    return abstain(Reason::NotFound, "No section matching \"" + target + "\" in the document.");
  }
  const auto& a = doc.sentences.at(sec->first);
  const auto& b = doc.sentences.at(sec->last);
  AnswerResponse r;
  r.question_type.l1 = taxonomy::L1::Mechanical;
  r.handler = Handler::Mechanical;
  r.evidence.push_back(make_evidence(doc, first_passage_with(doc, sec->first), a.char_start,
                                     b.char_end));
  r.answer_text = r.evidence.front().span.text;
  return r;
}

}  // namespace

AnswerResponse mechanical_handle(std::string_view question, const corpus::Document& doc) {
  std::string lower = text::ascii_lower(text::trim(question));
  while (!lower.empty() && (lower.back() == '.' || lower.back() == '?' || lower.back() == '!')) {
    lower.pop_back();
  }
  const std::string original(text::trim(question));

  for (auto verb : kFindVerbs) {
    auto rest = after_verb(lower, verb);
    if (!rest) continue;
    if (auto q = quoted(original)) return find_text(*q, doc);
    std::string needle(text::trim(*rest));
    // Unquoted targets keep the user's casing for the message only.
    return find_text(needle, doc);
  }
  for (auto verb : kNavVerbs) {
    auto rest = after_verb(lower, verb);
    if (!rest) continue;
    if (auto q = quoted(original)) return goto_section(*q, doc);
    return goto_section(*rest, doc);
  }
  return abstain(Reason::UnsupportedCommand,
                 "Only find, highlight, go-to-section and read-section commands are supported.");
}

}  // namespace dqa::assistant
