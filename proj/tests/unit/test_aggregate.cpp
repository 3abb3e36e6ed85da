// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>

#include "dqa/aggregate.hpp"
#include "dqa/corpus.hpp"
#include "dqa/error.hpp"

using namespace dqa;
using namespace dqa::aggregate;

namespace {

const corpus::Document& doc() {
  static const auto d = corpus::ingest(
      "Budget grew by ten percent. Hiring slowed in spring. The board met twice. "
      "Revenue rose sharply. Costs were flat. A new office opened. Staff moved in.",
      "report");
  return d;
}

corpus::AnswerSpan sentence_span(std::size_t i) {
  const auto& s = doc().sentences.at(i);
  return corpus::make_span(doc(), s.char_start, s.char_end);
}

AnnotationRecord rec(std::string worker) {
  AnnotationRecord r;
  r.question_id = "q1";
  r.doc_id = doc().id;
  r.question = "How did the budget change?";
  r.worker_id = std::move(worker);
  return r;
}

AnnotationRecord open(std::string worker, bool has_answer, std::vector<std::size_t> sentences = {}) {
  auto r = rec(std::move(worker));
  r.has_answer = has_answer;
  for (auto s : sentences) r.spans.push_back(sentence_span(s));
  return r;
}

AnnotationRecord yes_no(std::string worker, YesNo answer, bool no_evidence = false) {
  auto r = rec(std::move(worker));
  r.is_yes_no = true;
  r.yes_no_answer = answer;
  r.no_evidence = no_evidence;
  if (!no_evidence) r.spans.push_back(sentence_span(0));
  return r;
}

RecordGroups group(std::vector<AnnotationRecord> rs) { return {{"q1", std::move(rs)}}; }

}  // namespace

TEST_CASE("record validation") {
  auto r = open("w", true, {0, 1, 2});
  CHECK_NOTHROW(r.validate());
  r.spans.push_back(sentence_span(3));
  CHECK_THROWS_AS(r.validate(), Error);
  auto none = open("w", false, {0});
  CHECK_THROWS_AS(none.validate(), Error);
  auto long_span = open("w", true);
  long_span.spans.push_back({doc().id, std::string(701, 'x'), 0, 701});
  CHECK_THROWS_AS(long_span.validate(), Error);
}

TEST_CASE("invalid filtering: majority and ties discard") {
  auto flag = [](AnnotationRecord r) {
    r.invalid = true;
    return r;
  };
  CHECK(filter_invalid(group({flag(open("a", true)), flag(open("b", true)), open("c", true)}))
            .discarded.size() == 1);
  const auto kept = filter_invalid(group({open("a", true), open("b", true), open("c", true)}));
  CHECK(kept.kept.at("q1").size() == 3);
  CHECK(filter_invalid(group({flag(open("a", true)), open("b", true)})).discarded.size() == 1);
  const auto one = filter_invalid(group({flag(open("a", true)), open("b", true), open("c", true)}));
  CHECK(one.kept.at("q1").size() == 2);
}

TEST_CASE("consolidation cascade examples") {
  // is_yes_no [T,T,F]; keepers answer Yes and No -> tie -> Yes, one record.
  auto cq = consolidate({yes_no("a", YesNo::Yes), yes_no("b", YesNo::No), open("c", true, {1})});
  CHECK(cq.is_yes_no);
  CHECK(cq.yes_no_answer == YesNo::Yes);
  CHECK(cq.kept_records.size() == 1);
  CHECK(cq.kept_records[0].worker_id == "a");

  cq = consolidate({open("a", true, {0}), open("b", true, {1}), open("c", false)});
  CHECK_FALSE(cq.is_yes_no);
  CHECK_FALSE(cq.is_impossible);
  CHECK(cq.kept_records.size() == 2);

  cq = consolidate({yes_no("a", YesNo::No), open("b", true, {1})});
  CHECK(cq.is_yes_no);
  CHECK(cq.kept_records.size() == 1);

  cq = consolidate({yes_no("a", YesNo::No, true), yes_no("b", YesNo::No, true), yes_no("c", YesNo::No)});
  CHECK(cq.is_impossible);
  CHECK_FALSE(cq.has_evidence);
  CHECK(cq.kept_records.size() == 2);

  CHECK_THROWS_AS(consolidate({}), Error);
  auto other = open("x", true);
  other.question_id = "q2";
  CHECK_THROWS_AS(consolidate({open("a", true), other}), Error);
}

TEST_CASE("example expansion") {
  auto cq = consolidate({open("a", true, {0, 5}), open("b", true, {3}), open("c", false)});
  auto ex = expand_examples(cq, doc());
  REQUIRE(ex.size() == 3);
  for (const auto& e : ex) {
    CHECK_FALSE(e.is_impossible);
    CHECK(e.context.substr(e.answer_start, e.answer_text.size()) == e.answer_text);
    CHECK(doc().body.substr(e.context_offset, e.context.size()) == e.context);
  }
  CHECK(ex[1].passage_index == 1);  // sentence 5 first fits in window [1..5]

  cq = consolidate({open("a", false), open("b", false), open("c", false)});
  ex = expand_examples(cq, doc());
  REQUIRE(ex.size() == 1);
  CHECK(ex[0].is_impossible);
  CHECK(ex[0].answer_text.empty());

  cq = consolidate({yes_no("a", YesNo::Yes, true), yes_no("b", YesNo::Yes, true), yes_no("c", YesNo::Yes)});
  ex = expand_examples(cq, doc());
  REQUIRE(ex.size() == 1);
  CHECK(ex[0].is_impossible);
  CHECK(ex[0].is_yes_no);
  CHECK(ex[0].yes_no_answer == YesNo::Yes);
}

TEST_CASE("holdout split") {
  std::vector<std::string> ids;
  for (int i = 0; i < 56; ++i) ids.push_back("d" + std::to_string(i));
  const auto s = holdout_split(ids, 0.25, 42);
  CHECK(s.holdout.size() == 14);
  CHECK(s.train.size() == 42);
  CHECK(holdout_split(ids, 0.25, 42).holdout == s.holdout);
  CHECK(holdout_split({"a", "b", "c", "d"}, 0.25, 1).holdout.size() == 1);
  CHECK_THROWS_AS(holdout_split(ids, 0.0, 1), Error);
  CHECK_THROWS_AS(holdout_split(ids, 1.0, 1), Error);
}

TEST_CASE("dataset statistics") {
  const auto empty = dataset_stats({});
  CHECK(empty.valid_questions == 0);
  CHECK(empty.avg_spans_per_question == 0.0);
  CHECK(empty.undefined_averages);

  AggregationResult agg;
  ConsolidatedQuestion answered;
  answered.doc_id = "d";
  auto r = open("a", true);
  r.spans.push_back({"d", "one two three four five six seven eight nine ten", 0, 49});
  r.spans.push_back({"d", "one two three four five six seven eight nine ten", 50, 99});
  answered.kept_records = {r};
  ConsolidatedQuestion impossible;
  impossible.doc_id = "d";
  impossible.is_impossible = true;
  agg.questions = {answered, impossible};
  const auto s = dataset_stats(agg);
  CHECK(s.total_spans == 2);
  CHECK(s.avg_spans_per_question == 1.0);
  CHECK(s.avg_spans_per_answered_question == 2.0);
  CHECK(s.avg_span_tokens_answered == 10.0);
  CHECK(s.no_answer == 1);
  CHECK(s.no_answer_pct == 50.0);
  CHECK(s.annotated_documents == 1);
}

TEST_CASE("annotation JSONL round-trip") {
  const std::vector<AnnotationRecord> rs{open("a", true, {0, 2}), yes_no("b", YesNo::No, true)};
  const auto path = (std::filesystem::temp_directory_path() / "dqa_ann_test.jsonl").string();
  write_annotations(rs, path);
  CHECK(read_annotations(path) == rs);
  std::filesystem::remove(path);
}
