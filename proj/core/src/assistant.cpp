// SPDX-License-Identifier: Apache-2.0
#include "dqa/assistant.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <set>

#include <nlohmann/json.hpp>

#include "dqa/error.hpp"
#include "dqa/text.hpp"

namespace dqa::assistant {

std::string_view to_string(Handler h) {
  switch (h) {
    case Handler::Mechanical: return "mechanical";
    case Handler::Retrieval: return "retrieval";
    case Handler::Abstain: return "abstain";
  }
  return "abstain";
}

std::string_view to_string(Reason r) {
  switch (r) {
    case Reason::None: return "none";
    case Reason::LowScore: return "low_score";
    case Reason::NoSpan: return "no_span";
    case Reason::OutOfScope: return "out_of_scope";
    case Reason::UnsupportedCommand: return "unsupported_command";
    case Reason::NotFound: return "not_found";
    case Reason::BackendError: return "backend_error";
  }
  return "none";
}

Evidence make_evidence(const corpus::Document& doc, std::size_t passage_index,
                       std::size_t char_start, std::size_t char_end) {
  Evidence e;
  e.passage = {doc.id, static_cast<std::uint32_t>(passage_index)};
  e.span = corpus::make_span(doc, char_start, char_end);
  e.cp_start = text::codepoint_offset(doc.body, char_start);
  e.cp_end = text::codepoint_offset(doc.body, char_end);
  return e;
}

void verify_response(const AnswerResponse& r, const corpus::Document& doc) {
  if (r.abstained && !r.evidence.empty()) {
    throw Error(ErrorCode::InvalidArgument, "abstained response carries evidence");
  }
  if (r.yes_no_prefix && r.question_type.l2 != taxonomy::L2::YesNo) {
    throw Error(ErrorCode::InvalidArgument, "yes/no prefix on a non-yes/no question");
  }
  for (const auto& e : r.evidence) {
    const auto& s = e.span;
    if (s.doc_id != doc.id || s.char_start >= s.char_end || s.char_end > doc.body.size() ||
        doc.body.compare(s.char_start, s.char_end - s.char_start, s.text) != 0) {
      throw Error(ErrorCode::OffsetMismatch, "evidence span does not match document " + doc.id);
    }
  }
}

Handler route(const taxonomy::TaxonomyLabel& label) {
  switch (label.l1) {
    case taxonomy::L1::Mechanical: return Handler::Mechanical;
    case taxonomy::L1::Document:
    case taxonomy::L1::Factoid: return Handler::Retrieval;
    case taxonomy::L1::Other: return Handler::Abstain;
  }
  return Handler::Abstain;
}

std::optional<ExtractedSpan> extract_span(const corpus::Document& doc,
                                          const corpus::Passage& passage,
                                          std::span<const std::string> query_tokens) {
  std::set<std::string, std::less<>> query;
  for (const auto& t : query_tokens) {
    if (!text::is_stopword(t)) query.insert(t);
  }
  if (query.empty() || passage.sentence_end >= doc.sentences.size()) return std::nullopt;

  std::vector<std::set<std::string, std::less<>>> hits;
  for (std::size_t s = passage.sentence_start; s <= passage.sentence_end; ++s) {
    std::set<std::string, std::less<>> h;
    for (const auto& t : text::tokenize(doc.sentences[s].text)) {
      if (query.count(t)) h.insert(t);
    }
    hits.push_back(std::move(h));
  }

  std::size_t best = 0, best_first = 0, best_len = 0;
  for (std::size_t len = 1; len <= 3 && len <= hits.size(); ++len) {
    for (std::size_t first = 0; first + len <= hits.size(); ++first) {
      std::set<std::string, std::less<>> u;
      for (std::size_t k = first; k < first + len; ++k) u.insert(hits[k].begin(), hits[k].end());
      if (u.size() > best) {
        best = u.size();
        best_first = first;
        best_len = len;
      }
    }
  }
  if (best == 0) return std::nullopt;

  const auto& a = doc.sentences[passage.sentence_start + best_first];
  const auto& b = doc.sentences[passage.sentence_start + best_first + best_len - 1];
  return ExtractedSpan{doc.body.substr(a.char_start, b.char_end - a.char_start), a.char_start,
                       b.char_end, static_cast<double>(best)};
}

std::optional<ExtractedSpan> OverlapExtractor::extract(std::string_view question,
                                                       const corpus::Document& doc,
                                                       const corpus::Passage& passage) const {
  const auto tokens = text::tokenize(question);
  return extract_span(doc, passage, tokens);
}

AnswerResponse answer(std::string_view question, const taxonomy::TaxonomyLabel& label,
                      const corpus::Document& doc,
                      std::span<const corpus::Passage> passages,
                      const retrieval::PassageIndex& index,
                      const std::vector<rewrite::RewriteRule>& rules, double threshold,
                      const AnswerExtractor* extractor) {
  AnswerResponse r;
  r.question_type = label;
  r.handler = Handler::Retrieval;
  const bool yes_no = label.l2 == taxonomy::L2::YesNo;

  auto abstain = [&](Reason why) {
    r.abstained = true;
    r.reason = why;
    r.evidence.clear();
    r.answer_text = std::string(kNoAnswerMessage);
    if (yes_no) r.yes_no_prefix = aggregate::YesNo::No;
    return r;
  };

  const auto rw = rewrite::rewrite(question, rules);
  r.rewritten_question = rw.rewritten;
  const auto tokens = text::tokenize(rw.rewritten);
  const auto ranked = retrieval::bm25_rank(index, tokens, 1);
  if (ranked.entries.empty()) return abstain(Reason::LowScore);
  r.retrieval_score = ranked.entries.front().score;
  if (r.retrieval_score < threshold) return abstain(Reason::LowScore);

  const corpus::Passage& top = passages[ranked.entries.front().passage_id];
  std::optional<ExtractedSpan> found;
  if (extractor != nullptr) {
    try {
      found = extractor->extract(rw.rewritten, doc, top);
    } catch (const std::exception&) {
      return abstain(Reason::BackendError);
    }
  } else {
    found = extract_span(doc, top, tokens);
  }
  if (!found) return abstain(Reason::NoSpan);
  // External extractors are untrusted: their span must sit where they claim.
  if (found->char_start >= found->char_end || found->char_end > doc.body.size() ||
      doc.body.compare(found->char_start, found->char_end - found->char_start, found->text) != 0) {
    return abstain(Reason::BackendError);
  }

  r.evidence.push_back(make_evidence(doc, top.index, found->char_start, found->char_end));
  r.answer_text = found->text;
  if (yes_no) r.yes_no_prefix = aggregate::YesNo::Yes;
  return r;
}

IndexedDocument IndexedDocument::build(corpus::Document doc, const AnswerConfig& config) {
  auto passages = corpus::build_passages(doc, config.window);
  auto index = retrieval::PassageIndex::build(passages, config.bm25);
  return {std::move(doc), std::move(passages), std::move(index)};
}

AnswerResponse respond(std::string_view question, const IndexedDocument& doc,
                       const taxonomy::TaxonomyModel& model,
                       const std::vector<rewrite::RewriteRule>& rules,
                       const AnswerConfig& config, const AnswerExtractor* extractor) {
  const auto label = model.classify(question).label;
  switch (route(label)) {
    case Handler::Mechanical: {
      AnswerResponse r = mechanical_handle(question, doc.doc);
      r.question_type = label;
      return r;
    }
    case Handler::Retrieval:
      return answer(question, label, doc.doc, doc.passages, doc.index, rules, config.threshold,
                    extractor);
    case Handler::Abstain: break;
  }
  AnswerResponse r;
  r.question_type = label;
  r.handler = Handler::Abstain;
  r.abstained = true;
  r.reason = Reason::OutOfScope;
  r.answer_text = "This request is not a question about the document.";
  return r;
}

void Session::append(Turn turn) {
  std::lock_guard lock(mutex_);
  turns_.push_back(std::move(turn));
}

std::vector<Turn> Session::history() const {
  std::lock_guard lock(mutex_);
  return turns_;
}

Assistant::Assistant(taxonomy::TaxonomyModel model, std::vector<rewrite::RewriteRule> rules,
                     AnswerConfig config, std::shared_ptr<const AnswerExtractor> extractor)
    : model_(std::move(model)),
      rules_(std::move(rules)),
      config_(config),
      extractor_(std::move(extractor)) {}

std::string Assistant::add_document(std::string_view title, std::string_view text,
                                    corpus::SourceFormat format) {
  auto doc = corpus::ingest(text, title, format);
  const std::string id = doc.id;
  {
    std::shared_lock lock(mutex_);
    if (documents_.count(id)) return id;
  }
  auto indexed = std::make_shared<const IndexedDocument>(
      IndexedDocument::build(std::move(doc), config_));
  std::unique_lock lock(mutex_);
  documents_.emplace(id, std::move(indexed));
  return id;
}

std::shared_ptr<const IndexedDocument> Assistant::document(const std::string& doc_id) const {
  std::shared_lock lock(mutex_);
  auto it = documents_.find(doc_id);
  return it == documents_.end() ? nullptr : it->second;
}

std::shared_ptr<Session> Assistant::create_session(const std::string& doc_id) {
  std::unique_lock lock(mutex_);
  if (!documents_.count(doc_id)) {
    throw Error(ErrorCode::NotFound, "unknown document " + doc_id);
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "s-%06llu", static_cast<unsigned long long>(next_session_++));
  auto s = std::make_shared<Session>(buf, doc_id);
  sessions_.emplace(s->id(), s);
  return s;
}

std::shared_ptr<Session> Assistant::session(const std::string& session_id) const {
  std::shared_lock lock(mutex_);
  auto it = sessions_.find(session_id);
  return it == sessions_.end() ? nullptr : it->second;
}

AnswerResponse Assistant::ask(const std::string& session_id, std::string_view question) {
  auto s = session(session_id);
  if (!s) throw Error(ErrorCode::NotFound, "unknown session " + session_id);
  auto doc = document(s->doc_id());
  if (!doc) throw Error(ErrorCode::NotFound, "unknown document " + s->doc_id());
  AnswerResponse r = respond(question, *doc, model_, rules_, config_, extractor_.get());
  s->append({std::string(question), r, utc_timestamp()});
  return r;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void to_json(nlohmann::json& j, const Evidence& e) {
  j = {{"passage", {{"doc_id", e.passage.doc_id}, {"passage_index", e.passage.passage_index}}},
       {"span",
        {{"doc_id", e.span.doc_id},
         {"text", e.span.text},
         {"char_start", e.span.char_start},
         {"char_end", e.span.char_end},
         {"cp_start", e.cp_start},
         {"cp_end", e.cp_end}}}};
}

void to_json(nlohmann::json& j, const AnswerResponse& r) {
  j = {{"answer_text", r.answer_text},
       {"question_type", r.question_type},
       {"yes_no_prefix", r.yes_no_prefix
                             ? nlohmann::json(r.yes_no_prefix == aggregate::YesNo::Yes ? "Yes" : "No")
                             : nlohmann::json(nullptr)},
       {"evidence", r.evidence},
       {"retrieval_score", r.retrieval_score},
       {"abstained", r.abstained},
       {"handler", to_string(r.handler)},
       {"reason", to_string(r.reason)},
       {"rewritten_question", r.rewritten_question}};
}

void to_json(nlohmann::json& j, const Turn& t) {
  j = {{"question", t.question}, {"response", t.response}, {"timestamp", t.timestamp}};
}

}  // namespace dqa::assistant
