// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Links the core library only.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dqa/aggregate.hpp"
#include "dqa/assistant.hpp"
#include "dqa/corpus.hpp"
#include "dqa/error.hpp"
#include "dqa/evaluation.hpp"
#include "dqa/metrics.hpp"
#include "dqa/random.hpp"
#include "dqa/retrieval.hpp"
#include "dqa/rewrite.hpp"
#include "dqa/squad.hpp"
#include "dqa/synthetic.hpp"
#include "dqa/taxonomy.hpp"
#include "dqa/text.hpp"

using namespace dqa;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  std::array<char, 512> buf{};
  std::snprintf(buf.data(), buf.size(), f, args...);
  return buf.data();
}

std::string random_word(Rng& rng, std::size_t vocab) {
  return "w" + std::to_string(rng.index(vocab));
}

// ---------------------------------------------------------------------------

Outcome passage_windows() {
  const auto t0 = Clock::now();
  Rng rng(101);
  std::size_t bad = 0;
  for (int d = 0; d < 1000; ++d) {
    const std::size_t s = 1 + rng.index(60);
    std::string body;
    for (std::size_t i = 0; i < s; ++i) {
      body += "Sentence" + std::to_string(i);
      const std::size_t words = 2 + rng.index(8);
      for (std::size_t w = 0; w < words; ++w) body += " " + random_word(rng, 500);
      body += rng.bernoulli(0.2) ? "!\n" : ". ";
    }
    const auto doc = corpus::ingest(body, "doc");
    const auto ps = corpus::build_passages(doc, 5, 1);
    const std::size_t expect = s > 4 ? s - 4 : 1;
    if (doc.sentences.size() != s || ps.size() != expect) ++bad;
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && secs < 5.0, fmt("%zu/1000 mismatches, %.2f s", bad, secs)};
}

// ---------------------------------------------------------------------------

struct BruteHit {
  std::uint32_t id;
  double score;
};

// Direct BM25 over token lists, no index structures.
std::vector<BruteHit> brute_bm25(const std::vector<std::vector<std::string>>& docs,
                                 const std::vector<std::string>& query,
                                 retrieval::Bm25Params p) {
  const double n = static_cast<double>(docs.size());
  double total = 0.0;
  for (const auto& d : docs) total += static_cast<double>(d.size());
  const double avg = total / n;
  std::vector<BruteHit> hits;
  for (std::uint32_t i = 0; i < docs.size(); ++i) {
    double score = 0.0;
    for (const auto& term : query) {
      double df = 0.0;
      for (const auto& d : docs) df += std::count(d.begin(), d.end(), term) > 0 ? 1.0 : 0.0;
      const double tf = static_cast<double>(std::count(docs[i].begin(), docs[i].end(), term));
      if (tf == 0.0) continue;
      const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
      const double len = static_cast<double>(docs[i].size());
      score += idf * tf * (p.k1 + 1.0) / (tf + p.k1 * (1.0 - p.b + p.b * len / avg));
    }
    if (score > 0.0) hits.push_back({i, score});
  }
  // Scores equal up to rounding are ties and go to the smaller id.
  std::stable_sort(hits.begin(), hits.end(),
                   [](const BruteHit& a, const BruteHit& b) { return a.score > b.score; });
  for (std::size_t i = 0; i < hits.size();) {
    std::size_t j = i + 1;
    while (j < hits.size() && hits[i].score - hits[j].score <= 1e-12 * hits[i].score) ++j;
    std::sort(hits.begin() + static_cast<std::ptrdiff_t>(i),
              hits.begin() + static_cast<std::ptrdiff_t>(j),
              [](const BruteHit& a, const BruteHit& b) { return a.id < b.id; });
    i = j;
  }
  return hits;
}

Outcome bm25_oracle() {
  const auto t0 = Clock::now();
  Rng rng(202);
  std::size_t bad = 0;
  std::size_t queries = 0;
  double worst = 0.0;
  for (int c = 0; c < 200; ++c) {
    const std::size_t n = 1 + rng.index(50);
    const std::size_t vocab = 1 + rng.index(30);
    retrieval::Bm25Params params;
    if (c % 2 == 1) params = {0.1 + 2.9 * rng.uniform(), rng.uniform()};
    std::vector<corpus::Passage> passages;
    std::vector<std::vector<std::string>> tokens;
    for (std::size_t i = 0; i < n; ++i) {
      corpus::Passage p;
      p.doc_id = "d";
      p.index = i;
      const std::size_t len = rng.index(21);
      for (std::size_t t = 0; t < len; ++t) p.text += (t ? " " : "") + random_word(rng, vocab);
      tokens.push_back(text::tokenize(p.text));
      passages.push_back(std::move(p));
    }
    const auto index = retrieval::PassageIndex::build(passages, params);
    for (int q = 0; q < 10; ++q, ++queries) {
      std::vector<std::string> query;
      const std::size_t qlen = 1 + rng.index(5);
      for (std::size_t t = 0; t < qlen; ++t) query.push_back(random_word(rng, vocab + 3));
      const auto got = retrieval::bm25_rank(index, query, n).entries;
      const auto want = brute_bm25(tokens, query, params);
      bool ok = got.size() == want.size();
      for (std::size_t i = 0; ok && i < got.size(); ++i) {
        const double diff = std::fabs(got[i].score - want[i].score);
        worst = std::max(worst, diff);
        ok = got[i].passage_id == want[i].id && diff <= 1e-9;
      }
      bad += !ok;
    }
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && secs < 30.0,
          fmt("%zu/%zu queries differ, max |diff| %.1e, %.2f s", bad, queries, worst, secs)};
}

// ---------------------------------------------------------------------------

Outcome p_at_1_invariants() {
  Rng rng(303);
  std::size_t bad = 0;
  std::size_t oracle_bad = 0;
  const int instances = 10000;
  for (int it = 0; it < instances; ++it) {
    const std::size_t s = 1 + rng.index(25);
    std::string body;
    for (std::size_t i = 0; i < s; ++i) body += "Line " + std::to_string(i) + " text. ";
    const auto doc = corpus::ingest(body, "d");
    const auto ps = corpus::build_passages(doc);
    std::vector<std::vector<corpus::Chunk>> answers(1 + rng.index(3));
    for (auto& a : answers) {
      const std::size_t chunks = rng.index(4);
      for (std::size_t c = 0; c < chunks; ++c) {
        corpus::Chunk ch;
        ch.doc_id = doc.id;
        ch.sentence_index = rng.index(s);
        a.push_back(ch);
      }
    }
    if (std::all_of(answers.begin(), answers.end(), [](const auto& a) { return a.empty(); })) {
      answers[0].push_back({doc.id, "", 0, 0, rng.index(s), false});
    }
    const auto& retrieved = ps[rng.index(ps.size())];
    const auto p = metrics::p_at_1(retrieved, answers, ps);
    const bool ok = p.soft >= 0.0 && p.soft <= 1.0 && (p.hard == 0 || p.hard == 1) &&
                    ((p.soft > 0.0) == (p.hard == 1)) && p.soft <= p.hard;
    bad += !ok;

    // Oracle retriever: the passage holding most of a non-empty answer.
    const auto& gold = *std::find_if(answers.begin(), answers.end(),
                                     [](const auto& a) { return !a.empty(); });
    const auto best = std::max_element(ps.begin(), ps.end(), [&](const auto& a, const auto& b) {
      return corpus::score_passage(a, gold) < corpus::score_passage(b, gold);
    });
    const auto o = metrics::p_at_1(*best, answers, ps);
    oracle_bad += !(o.soft == 1.0 && o.hard == 1);
  }
  return {bad == 0 && oracle_bad == 0,
          fmt("%zu/%d invariant violations, oracle retriever misses %zu", bad, instances,
              oracle_bad)};
}

// ---------------------------------------------------------------------------

Outcome baseline_ordering() {
  synthetic::SyntheticSpec spec;
  spec.n_docs = 600;
  spec.questions_per_doc = 10;
  spec.sentences_per_doc = 20;
  spec.unanswerable_fraction = 0.0;
  spec.placement = synthetic::Placement::FirstSentence;
  spec.seed = 404;
  const auto corpus = synthetic::generate_synthetic(spec);
  const auto docs = evaluation::index_documents(corpus.documents);
  const auto questions =
      evaluation::ranking_questions(aggregate::aggregate_records(corpus.annotations), docs);
  const auto first = evaluation::evaluate_ranking(questions, docs, evaluation::Baseline::First);
  const auto random = evaluation::evaluate_ranking(questions, docs, evaluation::Baseline::Random);
  const auto per_doc = corpus::build_passages(corpus.documents.front()).size();
  const double chance = 1.0 / static_cast<double>(per_doc);
  const bool ok = questions.size() >= 5000 && per_doc == 16 &&
                  first.eval.p_at_1_hard == 1.0 &&
                  std::fabs(random.eval.p_at_1_hard - chance) <= 0.05 &&
                  first.eval.p_at_1_hard > random.eval.p_at_1_hard;
  return {ok, fmt("%zu questions, First hard %.4f, Random hard %.4f (1/%zu = %.4f)",
                  questions.size(), first.eval.p_at_1_hard, random.eval.p_at_1_hard, per_doc,
                  chance)};
}

// ---------------------------------------------------------------------------

bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

// Clipped n-gram overlap by nested loops.
metrics::RougeScore brute_rouge_n(const std::vector<std::string>& c,
                                  const std::vector<std::string>& r, std::size_t n) {
  auto grams = [n](const std::vector<std::string>& t) {
    std::vector<std::vector<std::string>> out;
    for (std::size_t i = 0; i + n <= t.size(); ++i)
      out.emplace_back(t.begin() + static_cast<std::ptrdiff_t>(i),
                       t.begin() + static_cast<std::ptrdiff_t>(i + n));
    return out;
  };
  const auto cg = grams(c);
  auto rg = grams(r);
  std::vector<bool> used(rg.size(), false);
  double overlap = 0.0;
  for (const auto& g : cg) {
    for (std::size_t j = 0; j < rg.size(); ++j) {
      if (!used[j] && rg[j] == g) {
        used[j] = true;
        overlap += 1.0;
        break;
      }
    }
  }
  metrics::RougeScore s;
  if (rg.empty()) {
    s.empty_reference = true;
    return s;
  }
  s.precision = cg.empty() ? 0.0 : overlap / static_cast<double>(cg.size());
  s.recall = overlap / static_cast<double>(rg.size());
  s.f1 = s.precision + s.recall > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall) : 0;
  return s;
}

bool is_subsequence(const std::vector<std::string>& sub, const std::vector<std::string>& seq) {
  std::size_t j = 0;
  for (const auto& t : seq)
    if (j < sub.size() && sub[j] == t) ++j;
  return j == sub.size();
}

// LCS by enumerating every subsequence of the first string.
std::size_t brute_lcs(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << a.size()); ++mask) {
    std::vector<std::string> sub;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (mask & (1u << i)) sub.push_back(a[i]);
    if (sub.size() > best && is_subsequence(sub, b)) best = sub.size();
  }
  return best;
}

bool same(const metrics::RougeScore& x, const metrics::RougeScore& y) {
  return x.empty_reference == y.empty_reference && close(x.precision, y.precision, 1e-12) &&
         close(x.recall, y.recall, 1e-12) && close(x.f1, y.f1, 1e-12);
}

Outcome rouge() {
  std::size_t fixture_bad = 0;
  auto fix = [&](bool ok) { fixture_bad += !ok; };
  auto r = metrics::rouge_n("the cat sat", "the cat", 1);
  fix(close(r.precision, 2.0 / 3.0, 1e-9) && close(r.recall, 1.0, 1e-9) && close(r.f1, 0.8, 1e-9));
  r = metrics::rouge_n("a b c d", "a b c d", 2);
  fix(close(r.precision, 1, 1e-9) && close(r.recall, 1, 1e-9) && close(r.f1, 1, 1e-9));
  fix(metrics::rouge_n("a b", "c d", 1).f1 == 0.0);
  r = metrics::rouge_l("a b c d", "a c d");
  fix(close(r.precision, 0.75, 1e-9) && close(r.recall, 1.0, 1e-9) && close(r.f1, 6.0 / 7.0, 1e-9));
  fix(close(metrics::rouge_l("x y z", "x y z").f1, 1.0, 1e-9));
  const std::vector<std::string> ab{"a", "b"}, ba{"b", "a"};
  fix(metrics::lcs_length(ab, ba) == 1);

  Rng rng(505);
  std::size_t random_bad = 0;
  const char* vocab[] = {"a", "b", "c", "d", "e"};
  for (int i = 0; i < 1000; ++i) {
    auto make = [&] {
      std::string s;
      const std::size_t len = rng.index(13);
      for (std::size_t t = 0; t < len; ++t) s += std::string(t ? " " : "") + vocab[rng.index(5)];
      return s;
    };
    const std::string cs = make(), rs = make();
    const auto c = text::tokenize(cs), ref = text::tokenize(rs);
    bool ok = true;
    for (std::size_t n : {1, 2}) ok = ok && same(metrics::rouge_n(cs, rs, n), brute_rouge_n(c, ref, n));
    const std::size_t lcs = brute_lcs(c, ref);
    ok = ok && metrics::lcs_length(c, ref) == lcs;
    metrics::RougeScore want;
    if (ref.empty()) {
      want.empty_reference = true;
    } else {
      want.precision = c.empty() ? 0.0 : static_cast<double>(lcs) / static_cast<double>(c.size());
      want.recall = static_cast<double>(lcs) / static_cast<double>(ref.size());
      want.f1 = want.precision + want.recall > 0
                    ? 2 * want.precision * want.recall / (want.precision + want.recall)
                    : 0;
    }
    ok = ok && same(metrics::rouge_l(cs, rs), want);
    random_bad += !ok;
  }
  return {fixture_bad == 0 && random_bad == 0,
          fmt("%zu fixture failures, %zu/1000 random strings differ from brute force",
              fixture_bad, random_bad)};
}

// ---------------------------------------------------------------------------

struct SquadCase {
  const char* prediction;
  std::vector<std::string> golds;
  double em;
  double f1;
};

const std::vector<SquadCase> kSquadCases = {
#include "squad_cases.inc"
};

Outcome f1_em() {
  std::size_t bad = 0;
  for (const auto& c : kSquadCases) {
    const auto s = metrics::squad_f1_em(c.prediction, c.golds);
    if (s.em != c.em || !close(s.f1, c.f1, 1e-12)) {
      ++bad;
      std::fprintf(stderr, "  f1/em mismatch for \"%s\": em %g f1 %.17g\n", c.prediction, s.em,
                   s.f1);
    }
  }
  Rng rng(606);
  const char* vocab[] = {"The", "a", "an", "cat", "dog", "Cat.", "dog,", "x", "(y)", "an", "", "!"};
  std::size_t violations = 0;
  std::size_t exact = 0;
  const int trials = 20000;
  for (int i = 0; i < trials; ++i) {
    auto make = [&] {
      std::string s;
      const std::size_t len = rng.index(5);
      for (std::size_t t = 0; t < len; ++t) s += std::string(t ? " " : "") + vocab[rng.index(12)];
      return s;
    };
    const std::string pred = make();
    std::vector<std::string> golds(rng.index(3));
    for (auto& g : golds) g = make();
    const auto s = metrics::squad_f1_em(pred, golds);
    if (s.em == 1.0) {
      ++exact;
      violations += s.f1 != 1.0;
    }
    violations += s.f1 < 0.0 || s.f1 > 1.0 || (s.em != 0.0 && s.em != 1.0);
  }
  return {bad == 0 && kSquadCases.size() >= 20 && violations == 0 && exact > 0,
          fmt("%zu/%zu fixtures wrong, %zu EM=1 without F1=1 in %d fuzz cases (%zu exact)", bad,
              kSquadCases.size(), violations, trials, exact)};
}

// ---------------------------------------------------------------------------

struct TableRow {
  std::array<int, 3> votes;
  bool is_yes_no;
  int answer;  // 0 none, 1 yes, 2 no
  bool has_evidence;
  unsigned kept_mask;
};

const std::vector<TableRow> kAggregationTable = {
#include "aggregation_table.inc"
};

aggregate::AnnotationRecord vote_record(int vote, int worker) {
  aggregate::AnnotationRecord r;
  r.question_id = "q";
  r.doc_id = "d";
  r.question = "q?";
  r.worker_id = "w" + std::to_string(worker);
  r.is_yes_no = vote >= 2;
  if (r.is_yes_no) {
    r.yes_no_answer = vote <= 3 ? aggregate::YesNo::Yes : aggregate::YesNo::No;
    r.no_evidence = vote == 3 || vote == 5;
  } else {
    r.has_answer = vote == 1;
  }
  if (r.is_yes_no ? !r.no_evidence : r.has_answer) {
    r.spans.push_back({"d", "span", 0, 4});
  }
  return r;
}

Outcome aggregation_table() {
  std::size_t bad = 0;
  for (const auto& row : kAggregationTable) {
    std::vector<aggregate::AnnotationRecord> records;
    for (int w = 0; w < 3; ++w) records.push_back(vote_record(row.votes[static_cast<std::size_t>(w)], w));
    const auto cq = aggregate::consolidate(records);
    unsigned mask = 0;
    for (const auto& k : cq.kept_records) mask |= 1u << (k.worker_id[1] - '0');
    const int answer = !cq.yes_no_answer ? 0 : *cq.yes_no_answer == aggregate::YesNo::Yes ? 1 : 2;
    const bool ok = cq.is_yes_no == row.is_yes_no && answer == row.answer &&
                    cq.has_evidence == row.has_evidence && cq.is_impossible == !row.has_evidence &&
                    mask == row.kept_mask;
    bad += !ok;
  }
  return {bad == 0 && kAggregationTable.size() == 216,
          fmt("%zu/%zu configurations disagree with the reference table", bad,
              kAggregationTable.size())};
}

// ---------------------------------------------------------------------------

Outcome classifier() {
  const auto data = synthetic::template_questions();
  const auto l1 = taxonomy::cross_validate(data, taxonomy::Level::L1, 5);
  const auto l2 = taxonomy::cross_validate(data, taxonomy::Level::L2, 5);
  const auto n1 = taxonomy::cross_validate(
      synthetic::with_label_noise(data, taxonomy::Level::L1, 0.3, 7), taxonomy::Level::L1, 5);
  const auto n2 = taxonomy::cross_validate(
      synthetic::with_label_noise(data, taxonomy::Level::L2, 0.3, 7), taxonomy::Level::L2, 5);
  auto in_band = [](double a) { return a >= 0.65 && a <= 0.85; };
  const bool ok = l1.mean_accuracy >= 0.95 && l2.mean_accuracy >= 0.95 &&
                  in_band(n1.mean_accuracy) && in_band(n2.mean_accuracy);
  return {ok, fmt("%zu questions; CV L1 %.3f, L2 %.3f; 30%% noise L1 %.3f, L2 %.3f", data.size(),
                  l1.mean_accuracy, l2.mean_accuracy, n1.mean_accuracy, n2.mean_accuracy)};
}

// ---------------------------------------------------------------------------

struct RewriteCase {
  const char* question;
  const char* expected;
  std::vector<int> applied;
};

const std::vector<RewriteCase> kRewriteCases = {
#include "rewrite_cases.inc"
};

Outcome rewrite_suite() {
  const auto rules = rewrite::default_rules();
  std::size_t bad = 0;
  std::size_t not_idempotent = 0;
  for (const auto& c : kRewriteCases) {
    const auto r = rewrite::rewrite(c.question, rules);
    if (r.rewritten != c.expected || r.applied != c.applied) {
      ++bad;
      std::fprintf(stderr, "  rewrite mismatch for \"%s\": \"%s\"\n", c.question,
                   r.rewritten.c_str());
    }
    not_idempotent += rewrite::rewrite(r.rewritten, rules).rewritten != r.rewritten;
  }
  const bool quirk_covered = std::any_of(kRewriteCases.begin(), kRewriteCases.end(),
                                         [](const RewriteCase& c) {
                                           return std::string(c.question).find("  ") !=
                                                  std::string::npos;
                                         });
  return {rules.size() == 6 && kRewriteCases.size() == 30 && bad == 0 && not_idempotent == 0 &&
              quirk_covered,
          fmt("%zu/%zu cases differ from the reference engine, %zu not idempotent", bad,
              kRewriteCases.size(), not_idempotent)};
}

// ---------------------------------------------------------------------------

// Random UTF-8 context with an answer cut at code-point boundaries.
aggregate::TrainingExample unicode_example(Rng& rng, const std::string& id) {
  static const char* pieces[] = {"a", "B", " ", "é", "Ж", "€", "𝄞", "中", "ß", ".", "'", "\""};
  std::vector<std::string> cps;
  const std::size_t len = 5 + rng.index(40);
  for (std::size_t i = 0; i < len; ++i) cps.push_back(pieces[rng.index(12)]);
  aggregate::TrainingExample e;
  e.id = e.question_id = id;
  e.question = "Qué?";
  e.doc_id = "unicode-" + std::to_string(rng.index(3));
  e.worker_id = "w";
  for (const auto& c : cps) e.context += c;
  if (rng.bernoulli(0.2)) {
    e.is_impossible = true;
    return e;
  }
  const std::size_t a = rng.index(len);
  const std::size_t b = a + 1 + rng.index(len - a);
  std::size_t start = 0;
  for (std::size_t i = 0; i < a; ++i) start += cps[i].size();
  for (std::size_t i = a; i < b; ++i) e.answer_text += cps[i];
  e.answer_start = start;
  return e;
}

Outcome squad_io() {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "dqa_acceptance_squad";
  fs::create_directories(dir);
  std::size_t bad = 0;
  std::size_t qas = 0;
  for (int f = 0; f < 100; ++f) {
    synthetic::SyntheticSpec spec;
    spec.n_docs = 2;
    spec.questions_per_doc = 5;
    spec.seed = 1000 + static_cast<std::uint64_t>(f);
    const auto corpus = synthetic::generate_synthetic(spec);
    const auto docs = evaluation::index_documents(corpus.documents);
    std::vector<aggregate::TrainingExample> examples;
    std::map<std::string, std::string> titles;
    for (const auto& q : aggregate::aggregate_records(corpus.annotations).questions) {
      const auto& doc = docs.at(q.doc_id);
      titles[doc.id] = doc.title;
      for (auto& e : aggregate::expand_examples(q, doc)) examples.push_back(std::move(e));
    }
    Rng rng(derive_seed(77, static_cast<std::uint64_t>(f)));
    for (int u = 0; u < 5; ++u) examples.push_back(unicode_example(rng, fmt("u%d-%d", f, u)));
    const auto path = (dir / fmt("set%03d.json", f)).string();
    try {
      const auto written = squad::write_squad(examples, path, titles);
      const auto read = squad::read_squad(path);
      squad::verify_offsets(read);
      bool ok = read == written && squad::parse_squad(squad::to_json(read)) == read;
      std::size_t n = 0;
      for (const auto& a : read.data)
        for (const auto& p : a.paragraphs) n += p.qas.size();
      ok = ok && n == examples.size();
      qas += n;
      bad += !ok;
    } catch (const Error& e) {
      ++bad;
      std::fprintf(stderr, "  squad file %d: %s\n", f, e.what());
    }
  }
  fs::remove_all(dir);
  bool genuine = false;
  try {
    const auto sample = squad::read_squad(std::string(DQA_FIXTURE_DIR) + "/squad2_dev_sample.json");
    genuine = !sample.data.empty() && squad::parse_squad(squad::to_json(sample)) == sample;
  } catch (const Error& e) {
    std::fprintf(stderr, "  dev sample: %s\n", e.what());
  }
  return {bad == 0 && genuine,
          fmt("%zu/100 files fail round-trip (%zu questions), dev sample %s", bad, qas,
              genuine ? "parsed" : "FAILED")};
}

// ---------------------------------------------------------------------------

Outcome end_to_end() {
  const auto t0 = Clock::now();
  synthetic::SyntheticSpec spec;
  spec.n_docs = 100;
  spec.questions_per_doc = 10;
  spec.unanswerable_fraction = 0.40;
  spec.seed = 1111;
  const auto corpus = synthetic::generate_synthetic(spec);
  const auto model = synthetic::default_model();
  const auto rules = rewrite::default_rules();
  std::map<std::string, assistant::IndexedDocument> indexed;
  for (const auto& d : corpus.documents) indexed.emplace(d.id, assistant::IndexedDocument::build(d));

  std::size_t answerable = 0, recalled = 0, unanswerable = 0, abstained = 0, broken = 0;
  for (const auto& q : corpus.questions) {
    const auto& idoc = indexed.at(q.doc_id);
    const auto r = assistant::respond(q.text, idoc, model, rules);
    try {
      assistant::verify_response(r, idoc.doc);
    } catch (const Error&) {
      ++broken;
    }
    if (q.answerable) {
      ++answerable;
      const bool hit = std::any_of(r.evidence.begin(), r.evidence.end(), [&](const auto& e) {
        return e.span.char_start <= q.gold_span.char_start &&
               q.gold_span.char_end <= e.span.char_end;
      });
      recalled += !r.abstained && hit;
    } else {
      ++unanswerable;
      abstained += r.abstained;
    }
  }
  const double recall = static_cast<double>(recalled) / static_cast<double>(answerable);
  const double abstention = static_cast<double>(abstained) / static_cast<double>(unanswerable);
  const double secs = seconds_since(t0);
  return {recall >= 0.9 && abstention >= 0.8 && broken == 0,
          fmt("span recall %.3f over %zu answerable, abstention %.3f over %zu unanswerable, "
              "%zu invariant violations, %.2f s",
              recall, answerable, abstention, unanswerable, broken, secs)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"passage-windows", passage_windows},
      {"bm25-oracle-equivalence", bm25_oracle},
      {"p-at-1-invariants", p_at_1_invariants},
      {"baseline-ordering", baseline_ordering},
      {"rouge", rouge},
      {"f1-em", f1_em},
      {"aggregation-decision-table", aggregation_table},
      {"classifier", classifier},
      {"rewrite", rewrite_suite},
      {"squad-io", squad_io},
      {"end-to-end", end_to_end},
  };
  const auto t0 = Clock::now();
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  const double secs = seconds_since(t0);
  std::printf("%zu/%zu criteria passed in %.1f s\n", criteria.size() - static_cast<std::size_t>(failed),
              criteria.size(), secs);
  return failed == 0 && secs < 300.0 ? 0 : 1;
}
