// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "dqa/corpus.hpp"
#include "dqa/error.hpp"
#include "dqa/retrieval.hpp"
#include "dqa/text.hpp"

using namespace dqa;
using namespace dqa::retrieval;

namespace {

corpus::Passage passage(std::string text, std::size_t index = 0) {
  corpus::Passage p;
  p.doc_id = "d";
  p.index = index;
  p.text = std::move(text);
  return p;
}

std::vector<corpus::Passage> passages(std::initializer_list<const char*> texts) {
  std::vector<corpus::Passage> out;
  for (const char* t : texts) out.push_back(passage(t, out.size()));
  return out;
}

std::string numbered(std::size_t n) {
  std::string body;
  for (std::size_t i = 0; i < n; ++i) body += "Sentence " + std::to_string(i) + " here. ";
  return body;
}

}  // namespace

TEST_CASE("index statistics") {
  const auto ps = passages({"a b a"});
  const auto idx = PassageIndex::build(ps);
  CHECK(idx.size() == 1);
  CHECK(idx.term_frequency("a", 0) == 2);
  CHECK(idx.term_frequency("b", 0) == 1);
  CHECK(idx.average_length() == 3.0);
  CHECK(idx.postings_for("zzz").empty());

  const auto doc = corpus::ingest(numbered(10), "t");
  CHECK(PassageIndex::build(corpus::build_passages(doc)).size() == 6);
}

TEST_CASE("index rejects bad input") {
  CHECK_THROWS_AS(PassageIndex::build(std::vector<corpus::Passage>{}), Error);
  const auto ps = passages({"a"});
  CHECK_THROWS_AS(PassageIndex::build(ps, {0.0, 0.75}), Error);
  CHECK_THROWS_AS(PassageIndex::build(ps, {1.2, 1.5}), Error);
}

TEST_CASE("duplicate passages score identically") {
  const auto ps = passages({"x y z", "x y z"});
  const auto idx = PassageIndex::build(ps);
  const std::vector<std::string> q{"x"};
  const auto r = bm25_rank(idx, q, 2);
  REQUIRE(r.entries.size() == 2);
  CHECK(r.entries[0].score == r.entries[1].score);
  CHECK(r.entries[0].passage_id == 0);
}

TEST_CASE("bm25_rank examples") {
  const auto ps = passages({"x y", "x x y"});
  const auto idx = PassageIndex::build(ps);
  const std::vector<std::string> x{"x"};
  auto r = bm25_rank(idx, x, 2);
  REQUIRE(r.entries.size() == 2);
  CHECK(r.entries[0].passage_id == 1);

  // Hand-computed: N=2, df=2, avgdl=2.5.
  const double idf = std::log(1.0 + (2 - 2 + 0.5) / (2 + 0.5));
  const double s1 = idf * 2 * 2.2 / (2 + 1.2 * (0.25 + 0.75 * 3 / 2.5));
  CHECK(r.entries[0].score == doctest::Approx(s1).epsilon(1e-12));

  const std::vector<std::string> absent{"nothing"};
  CHECK(bm25_rank(idx, absent, 3).entries.empty());
  CHECK(bm25_rank(idx, std::vector<std::string>{}, 3).entries.empty());
  CHECK_THROWS_AS(bm25_rank(idx, x, 0), Error);

  const auto many = passages({"alpha beta", "gamma delta epsilon", "beta gamma"});
  const auto idx2 = PassageIndex::build(many);
  const auto q = text::tokenize("gamma delta epsilon");
  CHECK(bm25_rank(idx2, q, 1).entries.at(0).passage_id == 1);
}

TEST_CASE("repeated query terms count repeatedly") {
  const auto ps = passages({"x y", "y z", "z w"});
  const auto idx = PassageIndex::build(ps);
  const std::vector<std::string> once{"x"}, twice{"x", "x"};
  CHECK(bm25_rank(idx, twice, 1).entries[0].score ==
        doctest::Approx(2 * bm25_rank(idx, once, 1).entries[0].score));
}

TEST_CASE("first and random passage baselines") {
  const auto doc = corpus::ingest(numbered(10), "t");
  const auto ps = corpus::build_passages(doc);
  CHECK(first_passage(ps).sentence_start == 0);
  CHECK(first_passage(ps).sentence_end == 4);
  CHECK(first_passage(doc).index == 0);
  const auto single = corpus::ingest("Only one.", "u");
  CHECK(first_passage(single).sentence_end == 0);
  CHECK(random_passage(single, 17).index == 0);
  CHECK(random_passage(ps, 9).index == random_passage(ps, 9).index);
  CHECK_THROWS_AS(first_passage(std::span<const corpus::Passage>{}), Error);

  // Each of six passages within 3 sigma of 1/6 over 60000 seeds.
  std::vector<int> counts(ps.size());
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) ++counts[random_passage(ps, static_cast<std::uint64_t>(i)).index];
  const double p = 1.0 / 6.0;
  const double sigma = std::sqrt(draws * p * (1 - p));
  for (int c : counts) CHECK(std::fabs(c - draws * p) <= 3 * sigma);
}

TEST_CASE("index file round-trip") {
  const auto doc = corpus::ingest(numbered(9), "t");
  const auto idx = PassageIndex::build(corpus::build_passages(doc), {1.5, 0.5});
  const auto path = (std::filesystem::temp_directory_path() / "dqa_index_test.bin").string();
  write_index(idx, path);
  CHECK(read_index(path) == idx);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_index(path), Error);
}
