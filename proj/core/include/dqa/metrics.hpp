// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dqa/aggregate.hpp"
#include "dqa/corpus.hpp"

namespace dqa::metrics {

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool empty_reference = false;
};

/// Clipped n-gram overlap. An empty reference yields zeros with the flag set.
RougeScore rouge_n(std::span<const std::string> candidate,
                   std::span<const std::string> reference, std::size_t n);

/// Longest-common-subsequence ROUGE (F with beta = 1).
RougeScore rouge_l(std::span<const std::string> candidate,
                   std::span<const std::string> reference);

/// Convenience overloads that tokenize with the retrieval tokenizer.
RougeScore rouge_n(std::string_view candidate, std::string_view reference,
                   std::size_t n);
RougeScore rouge_l(std::string_view candidate, std::string_view reference);

std::size_t lcs_length(std::span<const std::string> a,
                       std::span<const std::string> b);

struct PrecisionAtOne {
  double soft = 0.0;
  int hard = 0;
};

/// Soft and hard precision@1 for one retrieved passage. Each annotator's
/// answer is a chunk list; soft is the best annotator's chunk overlap with
/// the retrieved passage divided by that annotator's best overlap over all
/// passages. Throws Error(NoAnswerChunks) if every answer is empty.
PrecisionAtOne p_at_1(const corpus::Passage& retrieved,
                      const std::vector<std::vector<corpus::Chunk>>& answers,
                      std::span<const corpus::Passage> all_passages);

struct RankingEval {
  double p_at_1_soft = 0.0;
  double p_at_1_hard = 0.0;
  RougeScore rouge_1;
  RougeScore rouge_2;
  RougeScore rouge_l;
  std::size_t questions = 0;
};

/// Running mean of per-question ranking metrics.
class RankingAccumulator {
 public:
  void add(const PrecisionAtOne& p, const RougeScore& r1, const RougeScore& r2,
           const RougeScore& rl);
  RankingEval result() const;

 private:
  RankingEval sum_;
};

/// SQuAD answer normalization: lowercase, drop ASCII punctuation and the
/// articles a/an/the, collapse whitespace.
std::string normalize_answer(std::string_view s);

struct F1Em {
  double f1 = 0.0;  ///< in [0, 1]
  double em = 0.0;  ///< 0 or 1
};

/// Maximum over gold answers. Golds that normalize to empty are dropped; if
/// none remain the question is unanswerable and only an empty prediction
/// scores.
F1Em squad_f1_em(std::string_view prediction,
                 const std::vector<std::string>& gold_answers);

struct ExtractionEval {
  double f1 = 0.0;  ///< in [0, 100]
  double em = 0.0;
  std::size_t questions = 0;
  std::vector<double> per_question_f1;  ///< in [0, 1], input order
};

ExtractionEval summarize_extraction(const std::vector<F1Em>& scores);

struct MeanStdev {
  double mean = 0.0;
  double stdev = 0.0;  ///< sample standard deviation (n - 1)
  std::size_t n = 0;
};

MeanStdev mean_stdev(const std::vector<double>& values);

struct AgreementStats {
  std::size_t questions_with_impossible_vote = 0;
  double impossible_full_agreement_pct = 0.0;
  double impossible_partial_agreement_pct = 0.0;
  std::size_t questions_with_spans = 0;
  MeanStdev rouge_1;  ///< in [0, 100]
  MeanStdev rouge_2;
  MeanStdev rouge_l;
};

/// A worker votes "impossible" when reporting no answer (open questions) or
/// no evidence (yes/no questions). Invalid-flagged records are ignored, as
/// are questions with fewer than two remaining records.
AgreementStats agreement(const aggregate::RecordGroups& groups);

struct WilcoxonResult {
  double statistic = 0.0;  ///< min(W+, W-)
  double w_plus = 0.0;
  double w_minus = 0.0;
  double z = 0.0;
  double p_value = 1.0;    ///< two-sided
  std::size_t n = 0;       ///< non-zero pairs
};

/// Signed-rank test, normal approximation with tie-corrected variance and no
/// continuity correction. Zero differences are dropped; fewer than six
/// remaining pairs throws Error(TooFewPairs).
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a,
                                    std::span<const double> b);

void to_json(nlohmann::json& j, const RougeScore& r);
void to_json(nlohmann::json& j, const RankingEval& r);
void to_json(nlohmann::json& j, const ExtractionEval& e);
void to_json(nlohmann::json& j, const AgreementStats& a);
void to_json(nlohmann::json& j, const WilcoxonResult& w);

}  // namespace dqa::metrics
