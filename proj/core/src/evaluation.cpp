// SPDX-License-Identifier: Apache-2.0
#include "dqa/evaluation.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "dqa/assistant.hpp"
#include "dqa/error.hpp"
#include "dqa/random.hpp"
#include "dqa/text.hpp"

namespace dqa::evaluation {

std::string_view to_string(Baseline b) {
  switch (b) {
    case Baseline::Random: return "Random";
    case Baseline::First: return "First";
    case Baseline::Bm25: return "BM25";
  }
  return "First";
}

std::optional<Baseline> parse_baseline(std::string_view s) {
  const std::string l = text::ascii_lower(s);
  if (l == "random") return Baseline::Random;
  if (l == "first") return Baseline::First;
  if (l == "bm25") return Baseline::Bm25;
  return std::nullopt;
}

DocumentMap index_documents(const std::vector<corpus::Document>& docs) {
  DocumentMap m;
  for (const auto& d : docs) m.emplace(d.id, d);
  return m;
}

std::vector<RankingQuestion> ranking_questions(const aggregate::AggregationResult& aggregated,
                                               const DocumentMap& docs) {
  std::vector<RankingQuestion> out;
  for (const auto& cq : aggregated.questions) {
    auto doc = docs.find(cq.doc_id);
    if (doc == docs.end()) continue;
    RankingQuestion q{cq.question_id, cq.doc_id, cq.text, {}, {}};
    for (const auto& r : cq.kept_records) {
      std::vector<corpus::Chunk> chunks;
      std::string joined;
      for (const auto& span : r.spans) {
        auto c = corpus::chunk_answer(span, doc->second);
        chunks.insert(chunks.end(), c.begin(), c.end());
        if (!joined.empty()) joined += ' ';
        joined += span.text;
      }
      if (chunks.empty()) continue;
      q.answers.push_back(std::move(chunks));
      q.answer_texts.push_back(std::move(joined));
    }
    if (!q.answers.empty()) out.push_back(std::move(q));
  }
  return out;
}

RankingReport evaluate_ranking(const std::vector<RankingQuestion>& questions,
                               const DocumentMap& docs, Baseline baseline,
                               const RankingOptions& options) {
  RankingReport report;
  report.baseline = baseline;
  metrics::RankingAccumulator acc;

  struct Prepared {
    std::vector<corpus::Passage> passages;
    std::optional<retrieval::PassageIndex> index;
  };
  std::map<std::string, Prepared> cache;

  for (std::size_t i = 0; i < questions.size(); ++i) {
    const auto& q = questions[i];
    auto doc = docs.find(q.doc_id);
    if (doc == docs.end()) {
      throw Error(ErrorCode::DocumentMismatch, "question " + q.question_id + " has no document");
    }
    auto& prep = cache[q.doc_id];
    if (prep.passages.empty()) prep.passages = corpus::build_passages(doc->second, options.window);

    std::size_t chosen = 0;
    switch (baseline) {
      case Baseline::First: chosen = 0; break;
      case Baseline::Random:
        chosen = Rng(derive_seed(options.seed, i)).index(prep.passages.size());
        break;
      case Baseline::Bm25: {
        if (!prep.index) prep.index = retrieval::PassageIndex::build(prep.passages, options.bm25);
        const auto query = rewrite::rewrite(q.question, options.rules).rewritten;
        const auto tokens = text::tokenize(query);
        const auto ranked = retrieval::bm25_rank(*prep.index, tokens, 1, q.question_id);
        if (!ranked.entries.empty()) chosen = ranked.entries.front().passage_id;
        break;
      }
    }
    const auto& passage = prep.passages[chosen];

    RankedQuestion rq;
    rq.question_id = q.question_id;
    rq.passage_index = chosen;
    rq.p_at_1 = metrics::p_at_1(passage, q.answers, prep.passages);
    metrics::RougeScore best1, best2, bestl;
    for (const auto& ref : q.answer_texts) {
      const auto r1 = metrics::rouge_n(passage.text, ref, 1);
      const auto r2 = metrics::rouge_n(passage.text, ref, 2);
      const auto rl = metrics::rouge_l(passage.text, ref);
      if (r1.f1 > best1.f1) best1 = r1;
      if (r2.f1 > best2.f1) best2 = r2;
      if (rl.f1 > bestl.f1) bestl = rl;
    }
    rq.rouge_1 = best1.f1;
    rq.rouge_2 = best2.f1;
    rq.rouge_l = bestl.f1;
    acc.add(rq.p_at_1, best1, best2, bestl);
    report.per_question.push_back(std::move(rq));
  }
  report.eval = acc.result();
  return report;
}

std::map<std::string, std::string> predict_overlap(const squad::SquadFile& file,
                                                   const std::vector<rewrite::RewriteRule>& rules) {
  std::map<std::string, std::string> out;
  for (const auto& article : file.data) {
    for (const auto& p : article.paragraphs) {
      std::optional<corpus::Document> doc;
      std::optional<corpus::Passage> whole;
      try {
        doc = corpus::ingest(p.context, article.title);
        whole = corpus::build_passages(*doc, std::max<std::size_t>(1, doc->sentences.size())).front();
      } catch (const Error& e) {
        if (e.code() != ErrorCode::EmptyDocument) throw;
      }
      for (const auto& qa : p.qas) {
        std::string prediction;
        if (doc) {
          const auto tokens = text::tokenize(rewrite::rewrite(qa.question, rules).rewritten);
          if (auto span = assistant::extract_span(*doc, *whole, tokens)) prediction = span->text;
        }
        out[qa.id] = std::move(prediction);
      }
    }
  }
  return out;
}

ExtractionReport evaluate_predictions(const squad::SquadFile& gold,
                                      const std::map<std::string, std::string>& predictions) {
  ExtractionReport report;
  std::vector<metrics::F1Em> scores;
  for (const auto& [qid, golds] : squad::gold_answers(gold)) {
    auto it = predictions.find(qid);
    const std::string pred = it == predictions.end() ? std::string() : it->second;
    scores.push_back(metrics::squad_f1_em(pred, golds));
    report.question_ids.push_back(qid);
  }
  report.eval = metrics::summarize_extraction(scores);
  return report;
}

std::map<std::string, std::string> read_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  try {
    return nlohmann::json::parse(in).get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": predictions must be {id: text}: " + e.what());
  }
}

void write_predictions(const std::map<std::string, std::string>& predictions,
                       const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  out << nlohmann::json(predictions).dump(2) << '\n';
}

}  // namespace dqa::evaluation
