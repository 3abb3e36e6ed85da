// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <thread>

#include "dqa/assistant.hpp"
#include "dqa/error.hpp"
#include "dqa/rewrite.hpp"
#include "dqa/synthetic.hpp"
#include "dqa/text.hpp"

using namespace dqa;
using namespace dqa::assistant;

namespace {

const taxonomy::TaxonomyModel& model() {
  static const auto m = synthetic::default_model();
  return m;
}

std::string numbered_doc() {
  std::string body;
  const char* words[] = {"apples", "bridges", "candles", "dolphins", "engines", "forests",
                         "glaciers", "harbors", "islands", "jackets"};
  for (int i = 0; i < 10; ++i) body += std::string("The team studied ") + words[i] + " today. ";
  body += "The budget was approved by the council. Nothing else happened.";
  return body;
}

const taxonomy::TaxonomyLabel kFactual{taxonomy::L1::Document, taxonomy::L2::Factual, {}};
const taxonomy::TaxonomyLabel kYesNo{taxonomy::L1::Document, taxonomy::L2::YesNo,
                                     taxonomy::L3::Factual};

class ThrowingExtractor final : public AnswerExtractor {
 public:
  std::optional<ExtractedSpan> extract(std::string_view, const corpus::Document&,
                                       const corpus::Passage&) const override {
    throw std::runtime_error("backend down");
  }
};

class BogusExtractor final : public AnswerExtractor {
 public:
  std::optional<ExtractedSpan> extract(std::string_view, const corpus::Document&,
                                       const corpus::Passage& p) const override {
    return ExtractedSpan{"not in the body", p.char_start, p.char_start + 15, 1.0};
  }
};

}  // namespace

TEST_CASE("routing by L1") {
  CHECK(route({taxonomy::L1::Mechanical, {}, {}}) == Handler::Mechanical);
  CHECK(route({taxonomy::L1::Factoid, {}, {}}) == Handler::Retrieval);
  CHECK(route(kFactual) == Handler::Retrieval);
  CHECK(route({taxonomy::L1::Other, {}, {}}) == Handler::Abstain);
}

TEST_CASE("mechanical find returns matching sentences") {
  const auto doc = corpus::ingest(numbered_doc(), "t");
  auto r = mechanical_handle("find 'budget'", doc);
  CHECK_FALSE(r.abstained);
  REQUIRE(r.evidence.size() == 1);
  CHECK(r.evidence[0].span.text == doc.sentences[10].text);
  CHECK_NOTHROW(verify_response(r, doc));
  r = mechanical_handle("Highlight ``glaciers''", doc);
  REQUIRE(r.evidence.size() == 1);
  CHECK(r.evidence[0].span.text == doc.sentences[6].text);
  r = mechanical_handle("find 'zebras'", doc);
  CHECK(r.abstained);
  CHECK(r.reason == Reason::NotFound);
}

TEST_CASE("mechanical navigation and unsupported commands") {
  const auto doc = corpus::ingest(
      "# Overview\n\nThis is the intro. It is short.\n\n# Policies and Priorities\n\n"
      "Safety comes first. Quality comes second.\n\n# Contacts\n\nCall the office.",
      "md", corpus::SourceFormat::Markdown);
  auto r = mechanical_handle("go to policies and priorities", doc);
  CHECK_FALSE(r.abstained);
  REQUIRE(r.evidence.size() == 1);
  CHECK(r.answer_text.find("Safety comes first.") != std::string::npos);
  CHECK(r.answer_text.find("Call the office") == std::string::npos);
  CHECK_NOTHROW(verify_response(r, doc));
  r = mechanical_handle("read section 3", doc);
  CHECK(r.answer_text.find("Call the office.") != std::string::npos);
  r = mechanical_handle("change the font", doc);
  CHECK(r.abstained);
  CHECK(r.reason == Reason::UnsupportedCommand);
  CHECK(r.evidence.empty());
}

TEST_CASE("extract_span picks the best sentence window") {
  const auto doc = corpus::ingest(numbered_doc(), "t");
  const auto ps = corpus::build_passages(doc);
  auto q = text::tokenize("candles");
  auto s = extract_span(doc, ps[0], q);
  REQUIRE(s);
  CHECK(s->text == doc.sentences[2].text);
  q = text::tokenize("zebras");
  CHECK_FALSE(extract_span(doc, ps[0], q));
  // Both sentence 0 and 1 match one token: the earlier wins.
  q = text::tokenize("apples bridges");
  s = extract_span(doc, ps[0], q);
  REQUIRE(s);
  CHECK(s->text == doc.body.substr(doc.sentences[0].char_start,
                                   doc.sentences[1].char_end - doc.sentences[0].char_start));
  q = text::tokenize("team");  // every sentence ties
  s = extract_span(doc, ps[0], q);
  REQUIRE(s);
  CHECK(s->char_start == doc.sentences[0].char_start);
  CHECK(s->char_end == doc.sentences[0].char_end);
}

TEST_CASE("answer pipeline: found, abstained, yes/no") {
  const auto idoc = IndexedDocument::build(corpus::ingest(numbered_doc(), "t"));
  const auto rules = rewrite::default_rules();
  auto r = answer("who approved the budget?", kFactual, idoc.doc, idoc.passages, idoc.index, rules);
  CHECK_FALSE(r.abstained);
  CHECK(r.handler == Handler::Retrieval);
  CHECK(r.answer_text.find("budget was approved") != std::string::npos);
  CHECK_FALSE(r.yes_no_prefix);
  CHECK_NOTHROW(verify_response(r, idoc.doc));

  r = answer("zebra quantum velocity", kFactual, idoc.doc, idoc.passages, idoc.index, rules);
  CHECK(r.abstained);
  CHECK(r.reason == Reason::LowScore);
  CHECK(r.evidence.empty());
  CHECK(r.answer_text == kNoAnswerMessage);

  r = answer("was the budget approved?", kYesNo, idoc.doc, idoc.passages, idoc.index, rules);
  CHECK(r.yes_no_prefix == aggregate::YesNo::Yes);
  CHECK_FALSE(r.evidence.empty());
  r = answer("were zebras approved?", kYesNo, idoc.doc, idoc.passages, idoc.index, rules, 100.0);
  CHECK(r.abstained);
  CHECK(r.yes_no_prefix == aggregate::YesNo::No);
}

TEST_CASE("extractor failures abstain with BackendError") {
  const auto idoc = IndexedDocument::build(corpus::ingest(numbered_doc(), "t"));
  const auto rules = rewrite::default_rules();
  ThrowingExtractor t;
  auto r = answer("budget approved", kFactual, idoc.doc, idoc.passages, idoc.index, rules, 0.5, &t);
  CHECK(r.abstained);
  CHECK(r.reason == Reason::BackendError);
  BogusExtractor b;
  r = answer("budget approved", kFactual, idoc.doc, idoc.passages, idoc.index, rules, 0.5, &b);
  CHECK(r.abstained);
  CHECK(r.reason == Reason::BackendError);
}

TEST_CASE("respond routes reference questions") {
  const auto idoc = IndexedDocument::build(corpus::ingest(numbered_doc(), "t"));
  const auto rules = rewrite::default_rules();
  auto r = respond("Highlight ``budget''", idoc, model(), rules);
  CHECK(r.handler == Handler::Mechanical);
  r = respond("Read the email to me.", idoc, model(), rules);
  CHECK(r.abstained);
  CHECK(r.reason == Reason::OutOfScope);
  r = respond("Does the document state who approved the budget?", idoc, model(), rules);
  CHECK(r.question_type.l2 == taxonomy::L2::YesNo);
  CHECK(r.yes_no_prefix.has_value());
  for (const char* q : {"", "?", "   ", "a", "\xff\xfe"}) {
    CHECK_NOTHROW(verify_response(respond(q, idoc, model(), rules), idoc.doc));
  }
}

TEST_CASE("verify_response rejects broken invariants") {
  const auto doc = corpus::ingest(numbered_doc(), "t");
  AnswerResponse r;
  r.abstained = true;
  r.evidence.push_back(make_evidence(doc, 0, doc.sentences[0].char_start, doc.sentences[0].char_end));
  CHECK_THROWS_AS(verify_response(r, doc), Error);
  r.abstained = false;
  r.evidence[0].span.text = "tampered";
  CHECK_THROWS_AS(verify_response(r, doc), Error);
  AnswerResponse y;
  y.yes_no_prefix = aggregate::YesNo::Yes;
  y.question_type = kFactual;
  CHECK_THROWS_AS(verify_response(y, doc), Error);
}

TEST_CASE("assistant sessions are isolated") {
  Assistant a(model(), rewrite::default_rules());
  const auto id = a.add_document("t", numbered_doc());
  CHECK(a.add_document("t", numbered_doc()) == id);
  CHECK_THROWS_AS(a.create_session("missing"), Error);
  CHECK_THROWS_AS(a.ask("missing", "hi"), Error);
  const auto s1 = a.create_session(id);
  const auto s2 = a.create_session(id);
  CHECK(s1->id() != s2->id());

  std::thread t1([&] {
    for (int i = 0; i < 20; ++i) a.ask(s1->id(), "where are the candles " + std::to_string(i));
  });
  std::thread t2([&] {
    for (int i = 0; i < 20; ++i) a.ask(s2->id(), "who approved the budget " + std::to_string(i));
  });
  t1.join();
  t2.join();
  const auto h1 = s1->history();
  const auto h2 = s2->history();
  REQUIRE(h1.size() == 20);
  REQUIRE(h2.size() == 20);
  for (int i = 0; i < 20; ++i) {
    CHECK(h1[static_cast<std::size_t>(i)].question == "where are the candles " + std::to_string(i));
    CHECK(h2[static_cast<std::size_t>(i)].question == "who approved the budget " + std::to_string(i));
  }
  CHECK_THROWS_AS(a.add_document("t", "   "), Error);
}
