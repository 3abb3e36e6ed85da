// SPDX-License-Identifier: Apache-2.0
#include <fstream>

#include <nlohmann/json.hpp>

#include "dqa/aggregate.hpp"
#include "dqa/error.hpp"
#include "dqa/text.hpp"

namespace dqa::aggregate {

void to_json(nlohmann::json& j, const AnnotationRecord& r) {
  j = nlohmann::json{{"schema", kAnnotationSchema},
                     {"question_id", r.question_id},
                     {"doc_id", r.doc_id},
                     {"question", r.question},
                     {"worker_id", r.worker_id},
                     {"invalid", r.invalid},
                     {"is_yes_no", r.is_yes_no},
                     {"no_evidence", r.no_evidence},
                     {"has_answer", r.has_answer},
                     {"hard", r.hard}};
  j["yes_no_answer"] = r.yes_no_answer
                           ? nlohmann::json(std::string(to_string(*r.yes_no_answer)))
                           : nlohmann::json(nullptr);
  auto& spans = j["spans"] = nlohmann::json::array();
  for (const auto& s : r.spans) {
    spans.push_back({{"char_start", s.char_start},
                     {"char_end", s.char_end},
                     {"text", s.text}});
  }
}

void from_json(const nlohmann::json& j, AnnotationRecord& r) {
  if (const auto schema = j.value("schema", std::string(kAnnotationSchema));
      schema != kAnnotationSchema) {
    throw Error(ErrorCode::ParseError, "unsupported annotation schema " + schema);
  }
  r = AnnotationRecord{};
  r.question_id = j.at("question_id").get<std::string>();
  r.doc_id = j.at("doc_id").get<std::string>();
  r.question = j.value("question", "");
  r.worker_id = j.at("worker_id").get<std::string>();
  r.invalid = j.value("invalid", false);
  r.is_yes_no = j.value("is_yes_no", false);
  r.no_evidence = j.contains("no_evidence") && j["no_evidence"].is_boolean()
                      ? j["no_evidence"].get<bool>()
                      : false;
  r.has_answer = j.contains("has_answer") && j["has_answer"].is_boolean()
                     ? j["has_answer"].get<bool>()
                     : true;
  r.hard = j.value("hard", false);
  if (j.contains("yes_no_answer") && j["yes_no_answer"].is_string()) {
    const auto a = text::ascii_lower(j["yes_no_answer"].get<std::string>());
    if (a == "yes") {
      r.yes_no_answer = YesNo::Yes;
    } else if (a == "no") {
      r.yes_no_answer = YesNo::No;
    } else {
      throw Error(ErrorCode::ParseError, "yes_no_answer must be yes or no");
    }
  }
  if (j.contains("spans")) {
    for (const auto& s : j["spans"]) {
      corpus::AnswerSpan span;
      span.doc_id = r.doc_id;
      span.char_start = s.at("char_start").get<std::size_t>();
      span.char_end = s.at("char_end").get<std::size_t>();
      span.text = s.at("text").get<std::string>();
      if (span.char_end < span.char_start ||
          span.char_end - span.char_start != span.text.size()) {
        throw Error(ErrorCode::OffsetMismatch,
                    "span offsets disagree with span text in " + r.question_id);
      }
      r.spans.push_back(std::move(span));
    }
  }
  r.validate();
}

void to_json(nlohmann::json& j, const ConsolidatedQuestion& q) {
  j = nlohmann::json{{"question_id", q.question_id},
                     {"doc_id", q.doc_id},
                     {"text", q.text},
                     {"is_yes_no", q.is_yes_no},
                     {"has_evidence", q.has_evidence},
                     {"is_impossible", q.is_impossible},
                     {"kept_records", q.kept_records}};
  j["yes_no_answer"] = q.yes_no_answer
                           ? nlohmann::json(std::string(to_string(*q.yes_no_answer)))
                           : nlohmann::json(nullptr);
}

void to_json(nlohmann::json& j, const DatasetStats& s) {
  j = nlohmann::json{
      {"annotated_documents", s.annotated_documents},
      {"valid_questions", s.valid_questions},
      {"invalid_questions", s.invalid_questions},
      {"open_questions", s.open_questions},
      {"open_pct", s.open_pct},
      {"yes_no_questions", s.yes_no_questions},
      {"yes_no_pct", s.yes_no_pct},
      {"no_answer", s.no_answer},
      {"no_answer_pct", s.no_answer_pct},
      {"no_evidence", s.no_evidence},
      {"no_evidence_pct", s.no_evidence_pct},
      {"total_spans", s.total_spans},
      {"answered_questions", s.answered_questions},
      {"avg_spans_per_question", s.avg_spans_per_question},
      {"avg_spans_per_answered_question", s.avg_spans_per_answered_question},
      {"avg_span_tokens_per_question", s.avg_span_tokens_per_question},
      {"avg_span_tokens_answered", s.avg_span_tokens_answered},
      {"undefined_averages", s.undefined_averages},
  };
}

std::vector<AnnotationRecord> read_annotations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::vector<AnnotationRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      out.push_back(nlohmann::json::parse(line).get<AnnotationRecord>());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError,
                  path + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.code(), path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_annotations(const std::vector<AnnotationRecord>& records,
                       const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path);
  for (const auto& r : records) out << nlohmann::json(r).dump() << '\n';
}

}  // namespace dqa::aggregate
