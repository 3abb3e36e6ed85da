// SPDX-License-Identifier: Apache-2.0
#include "dqa/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>

#include <nlohmann/json.hpp>

#include "dqa/error.hpp"
#include "dqa/text.hpp"

namespace dqa::metrics {
namespace {

RougeScore from_counts(double overlap, double candidate, double reference) {
  RougeScore s;
  if (reference == 0.0) {
    s.empty_reference = true;
    return s;
  }
  s.precision = candidate > 0.0 ? overlap / candidate : 0.0;
  s.recall = overlap / reference;
  s.f1 = s.precision + s.recall > 0.0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

std::map<std::vector<std::string>, std::size_t> ngram_counts(
    std::span<const std::string> tokens, std::size_t n) {
  std::map<std::vector<std::string>, std::size_t> counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                      tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

bool is_ascii_punct(unsigned char c) { return c < 0x80 && std::ispunct(c); }

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && text::is_space(s[i])) ++i;
    const std::size_t b = i;
    while (i < s.size() && !text::is_space(s[i])) ++i;
    if (i > b) out.emplace_back(s.substr(b, i - b));
  }
  return out;
}

double token_f1(const std::vector<std::string>& pred,
                const std::vector<std::string>& gold) {
  if (pred.empty() || gold.empty()) return pred == gold ? 1.0 : 0.0;
  std::map<std::string, int> counts;
  for (const auto& t : gold) ++counts[t];
  int common = 0;
  for (const auto& t : pred) {
    if (auto it = counts.find(t); it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  const double p = static_cast<double>(common) / static_cast<double>(pred.size());
  const double r = static_cast<double>(common) / static_cast<double>(gold.size());
  return 2.0 * p * r / (p + r);
}

// Standard normal upper tail times two.
double two_sided_p(double z) { return std::erfc(std::fabs(z) / std::sqrt(2.0)); }

}  // namespace

RougeScore rouge_n(std::span<const std::string> candidate,
                   std::span<const std::string> reference, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "ROUGE-N needs n >= 1");
  const auto cand = ngram_counts(candidate, n);
  const auto ref = ngram_counts(reference, n);
  std::size_t overlap = 0;
  for (const auto& [gram, count] : cand) {
    if (auto it = ref.find(gram); it != ref.end()) overlap += std::min(count, it->second);
  }
  const auto total = [](std::span<const std::string> t, std::size_t k) {
    return t.size() >= k ? static_cast<double>(t.size() - k + 1) : 0.0;
  };
  return from_counts(static_cast<double>(overlap), total(candidate, n),
                     total(reference, n));
}

std::size_t lcs_length(std::span<const std::string> a,
                       std::span<const std::string> b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

RougeScore rouge_l(std::span<const std::string> candidate,
                   std::span<const std::string> reference) {
  return from_counts(static_cast<double>(lcs_length(candidate, reference)),
                     static_cast<double>(candidate.size()),
                     static_cast<double>(reference.size()));
}

RougeScore rouge_n(std::string_view candidate, std::string_view reference,
                   std::size_t n) {
  const auto c = text::tokenize(candidate);
  const auto r = text::tokenize(reference);
  return rouge_n(std::span<const std::string>(c), std::span<const std::string>(r), n);
}

RougeScore rouge_l(std::string_view candidate, std::string_view reference) {
  const auto c = text::tokenize(candidate);
  const auto r = text::tokenize(reference);
  return rouge_l(std::span<const std::string>(c), std::span<const std::string>(r));
}

PrecisionAtOne p_at_1(const corpus::Passage& retrieved,
                      const std::vector<std::vector<corpus::Chunk>>& answers,
                      std::span<const corpus::Passage> all_passages) {
  const bool any = std::any_of(answers.begin(), answers.end(),
                               [](const auto& a) { return !a.empty(); });
  if (!any) throw Error(ErrorCode::NoAnswerChunks, "no annotator answer has chunks");
  PrecisionAtOne out;
  for (const auto& chunks : answers) {
    if (chunks.empty()) continue;
    const int overlap = corpus::score_passage(retrieved, chunks);
    int best = 0;
    for (const auto& p : all_passages) best = std::max(best, corpus::score_passage(p, chunks));
    best = std::max(best, overlap);
    if (overlap > 0) {
      out.hard = 1;
      out.soft = std::max(out.soft, static_cast<double>(overlap) / best);
    }
  }
  return out;
}

void RankingAccumulator::add(const PrecisionAtOne& p, const RougeScore& r1,
                             const RougeScore& r2, const RougeScore& rl) {
  sum_.p_at_1_soft += p.soft;
  sum_.p_at_1_hard += p.hard;
  auto add_score = [](RougeScore& into, const RougeScore& s) {
    into.precision += s.precision;
    into.recall += s.recall;
    into.f1 += s.f1;
  };
  add_score(sum_.rouge_1, r1);
  add_score(sum_.rouge_2, r2);
  add_score(sum_.rouge_l, rl);
  ++sum_.questions;
}

RankingEval RankingAccumulator::result() const {
  RankingEval r = sum_;
  if (r.questions == 0) return r;
  const double n = static_cast<double>(r.questions);
  r.p_at_1_soft /= n;
  r.p_at_1_hard /= n;
  for (RougeScore* s : {&r.rouge_1, &r.rouge_2, &r.rouge_l}) {
    s->precision /= n;
    s->recall /= n;
    s->f1 /= n;
  }
  return r;
}

std::string normalize_answer(std::string_view s) {
  std::string lowered;
  lowered.reserve(s.size());
  for (char c : s) {
    if (is_ascii_punct(static_cast<unsigned char>(c))) continue;
    lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  std::string out;
  for (const auto& w : split_ws(lowered)) {
    if (w == "a" || w == "an" || w == "the") continue;
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

F1Em squad_f1_em(std::string_view prediction,
                 const std::vector<std::string>& gold_answers) {
  const std::string pred = normalize_answer(prediction);
  const auto pred_tokens = split_ws(pred);
  // As in the official evaluation, golds that normalize to nothing are
  // ignored; with none left the question counts as unanswerable.
  std::vector<std::string> golds;
  for (const auto& g : gold_answers) {
    if (auto n = normalize_answer(g); !n.empty()) golds.push_back(std::move(n));
  }
  if (golds.empty()) golds.emplace_back();
  F1Em best;
  for (const auto& gold : golds) {
    best.em = std::max(best.em, pred == gold ? 1.0 : 0.0);
    best.f1 = std::max(best.f1, token_f1(pred_tokens, split_ws(gold)));
  }
  return best;
}

ExtractionEval summarize_extraction(const std::vector<F1Em>& scores) {
  ExtractionEval e;
  e.questions = scores.size();
  for (const auto& s : scores) {
    e.f1 += s.f1;
    e.em += s.em;
    e.per_question_f1.push_back(s.f1);
  }
  if (!scores.empty()) {
    e.f1 = 100.0 * e.f1 / static_cast<double>(scores.size());
    e.em = 100.0 * e.em / static_cast<double>(scores.size());
  }
  return e;
}

MeanStdev mean_stdev(const std::vector<double>& values) {
  MeanStdev m;
  m.n = values.size();
  if (values.empty()) return m;
  m.mean = std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - m.mean) * (v - m.mean);
    m.stdev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return m;
}

AgreementStats agreement(const aggregate::RecordGroups& groups) {
  AgreementStats out;
  std::size_t full = 0;
  std::size_t partial = 0;
  std::vector<double> r1, r2, rl;
  for (const auto& [qid, all] : groups) {
    std::vector<const aggregate::AnnotationRecord*> records;
    for (const auto& r : all) {
      if (!r.invalid) records.push_back(&r);
    }
    if (records.size() < 2) continue;
    std::size_t impossible = 0;
    for (const auto* r : records) {
      if (r->is_yes_no ? r->no_evidence : !r->has_answer) ++impossible;
    }
    if (impossible == records.size()) {
      ++full;
    } else if (impossible > 0) {
      ++partial;
    }

    std::vector<std::vector<std::string>> selections;
    for (const auto* r : records) {
      if (r->spans.empty()) continue;
      std::string joined;
      for (const auto& s : r->spans) {
        if (!joined.empty()) joined.push_back(' ');
        joined += s.text;
      }
      selections.push_back(text::tokenize(joined));
    }
    if (selections.size() < 2) continue;
    double s1 = 0.0, s2 = 0.0, sl = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < selections.size(); ++i) {
      for (std::size_t k = i + 1; k < selections.size(); ++k) {
        const std::span<const std::string> a(selections[i]);
        const std::span<const std::string> b(selections[k]);
        s1 += rouge_n(a, b, 1).f1;
        s2 += rouge_n(a, b, 2).f1;
        sl += rouge_l(a, b).f1;
        ++pairs;
      }
    }
    const double p = static_cast<double>(pairs);
    r1.push_back(100.0 * s1 / p);
    r2.push_back(100.0 * s2 / p);
    rl.push_back(100.0 * sl / p);
  }
  out.questions_with_impossible_vote = full + partial;
  if (full + partial > 0) {
    const double n = static_cast<double>(full + partial);
    out.impossible_full_agreement_pct = 100.0 * static_cast<double>(full) / n;
    out.impossible_partial_agreement_pct = 100.0 * static_cast<double>(partial) / n;
  }
  out.questions_with_spans = r1.size();
  out.rouge_1 = mean_stdev(r1);
  out.rouge_2 = mean_stdev(r2);
  out.rouge_l = mean_stdev(rl);
  return out;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a,
                                    std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::InvalidArgument, "paired samples differ in length");
  }
  std::vector<double> diffs;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (d != 0.0) diffs.push_back(d);
  }
  const std::size_t n = diffs.size();
  if (n < 6) {
    throw Error(ErrorCode::TooFewPairs,
                "signed-rank test needs at least 6 non-zero differences, got " +
                    std::to_string(n));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return std::fabs(diffs[x]) < std::fabs(diffs[y]);
  });
  std::vector<double> ranks(n);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && std::fabs(diffs[order[j + 1]]) == std::fabs(diffs[order[i]])) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  WilcoxonResult r;
  r.n = n;
  for (std::size_t i = 0; i < n; ++i) (diffs[i] > 0 ? r.w_plus : r.w_minus) += ranks[i];
  r.statistic = std::min(r.w_plus, r.w_minus);
  const double nn = static_cast<double>(n);
  const double mean = nn * (nn + 1.0) / 4.0;
  const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
  r.z = var > 0.0 ? (r.statistic - mean) / std::sqrt(var) : 0.0;
  r.p_value = var > 0.0 ? two_sided_p(r.z) : 1.0;
  return r;
}

void to_json(nlohmann::json& j, const RougeScore& r) {
  j = nlohmann::json{{"precision", r.precision}, {"recall", r.recall}, {"f1", r.f1}};
}

void to_json(nlohmann::json& j, const RankingEval& r) {
  j = nlohmann::json{{"p_at_1_soft", r.p_at_1_soft},
                     {"p_at_1_hard", r.p_at_1_hard},
                     {"rouge_1", r.rouge_1},
                     {"rouge_2", r.rouge_2},
                     {"rouge_l", r.rouge_l},
                     {"questions", r.questions}};
}

void to_json(nlohmann::json& j, const ExtractionEval& e) {
  j = nlohmann::json{{"f1", e.f1}, {"em", e.em}, {"questions", e.questions}};
}

void to_json(nlohmann::json& j, const AgreementStats& a) {
  auto ms = [](const MeanStdev& m) {
    return nlohmann::json{{"mean", m.mean}, {"stdev", m.stdev}, {"n", m.n}};
  };
  j = nlohmann::json{
      {"questions_with_impossible_vote", a.questions_with_impossible_vote},
      {"impossible_full_agreement_pct", a.impossible_full_agreement_pct},
      {"impossible_partial_agreement_pct", a.impossible_partial_agreement_pct},
      {"questions_with_spans", a.questions_with_spans},
      {"rouge_1_f", ms(a.rouge_1)},
      {"rouge_2_f", ms(a.rouge_2)},
      {"rouge_l_f", ms(a.rouge_l)},
  };
}

void to_json(nlohmann::json& j, const WilcoxonResult& w) {
  j = nlohmann::json{{"statistic", w.statistic}, {"w_plus", w.w_plus},
                     {"w_minus", w.w_minus},     {"z", w.z},
                     {"p_value", w.p_value},     {"n", w.n}};
}

}  // namespace dqa::metrics
