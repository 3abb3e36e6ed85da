// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dqa/aggregate.hpp"
#include "dqa/corpus.hpp"
#include "dqa/metrics.hpp"
#include "dqa/retrieval.hpp"
#include "dqa/rewrite.hpp"
#include "dqa/squad.hpp"

namespace dqa::evaluation {

enum class Baseline { Random, First, Bm25 };

std::string_view to_string(Baseline b);
std::optional<Baseline> parse_baseline(std::string_view s);

using DocumentMap = std::map<std::string, corpus::Document>;

DocumentMap index_documents(const std::vector<corpus::Document>& docs);

/// A question usable for passage ranking: at least one kept annotator
/// selected spans.
struct RankingQuestion {
  std::string question_id;
  std::string doc_id;
  std::string question;
  std::vector<std::vector<corpus::Chunk>> answers;  ///< per annotator
  std::vector<std::string> answer_texts;            ///< spans joined by spaces
};

/// Questions whose document is unknown are skipped.
std::vector<RankingQuestion> ranking_questions(const aggregate::AggregationResult& aggregated,
                                               const DocumentMap& docs);

struct RankingOptions {
  std::uint64_t seed = 42;
  std::size_t window = corpus::kDefaultWindow;
  retrieval::Bm25Params bm25;
  std::vector<rewrite::RewriteRule> rules;  ///< applied to BM25 queries
};

struct RankedQuestion {
  std::string question_id;
  std::size_t passage_index = 0;
  metrics::PrecisionAtOne p_at_1;
  double rouge_1 = 0.0;  ///< F-scores, best over annotators
  double rouge_2 = 0.0;
  double rouge_l = 0.0;
};

struct RankingReport {
  Baseline baseline = Baseline::First;
  metrics::RankingEval eval;
  std::vector<RankedQuestion> per_question;
};

/// Retrieves one passage per question and scores it. Random draws use
/// derive_seed(seed, position); BM25 without any matching passage falls back
/// to passage 0 (the lowest id, as in tie-breaking). ROUGE compares the
/// passage with each annotator's answer and keeps the best F-score.
RankingReport evaluate_ranking(const std::vector<RankingQuestion>& questions,
                               const DocumentMap& docs, Baseline baseline,
                               const RankingOptions& options = {});

/// Baseline extractor over SQuAD contexts: the best overlapping 1–3
/// sentences of the context, or "" (no answer) when nothing overlaps.
std::map<std::string, std::string> predict_overlap(const squad::SquadFile& file,
                                                   const std::vector<rewrite::RewriteRule>& rules);

struct ExtractionReport {
  metrics::ExtractionEval eval;
  std::vector<std::string> question_ids;  ///< order of per_question_f1
};

/// Missing predictions count as "no answer".
ExtractionReport evaluate_predictions(const squad::SquadFile& gold,
                                      const std::map<std::string, std::string>& predictions);

std::map<std::string, std::string> read_predictions(const std::string& path);
void write_predictions(const std::map<std::string, std::string>& predictions,
                       const std::string& path);

}  // namespace dqa::evaluation
