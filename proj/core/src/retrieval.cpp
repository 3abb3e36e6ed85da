// SPDX-License-Identifier: Apache-2.0
#include "dqa/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "dqa/error.hpp"
#include "dqa/random.hpp"
#include "dqa/text.hpp"

namespace dqa::retrieval {

PassageIndex PassageIndex::build(std::span<const corpus::Passage> passages,
                                 Bm25Params params) {
  if (passages.empty()) {
    throw Error(ErrorCode::EmptyCorpus, "cannot index an empty passage list");
  }
  if (!(params.k1 > 0.0) || !(params.b >= 0.0 && params.b <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "BM25 requires k1 > 0 and b in [0, 1]");
  }
  PassageIndex index;
  index.params_ = params;
  index.lengths_.reserve(passages.size());
  index.refs_.reserve(passages.size());
  double total = 0.0;
  for (std::size_t id = 0; id < passages.size(); ++id) {
    const auto tokens = text::tokenize(passages[id].text);
    std::map<std::string, std::uint32_t> tf;
    for (const auto& t : tokens) ++tf[t];
    for (auto& [term, count] : tf) {
      index.postings_[term].push_back({static_cast<std::uint32_t>(id), count});
    }
    index.lengths_.push_back(static_cast<std::uint32_t>(tokens.size()));
    index.refs_.push_back({passages[id].doc_id,
                           static_cast<std::uint32_t>(passages[id].index)});
    total += static_cast<double>(tokens.size());
  }
  index.avg_len_ = total / static_cast<double>(passages.size());
  return index;
}

std::span<const Posting> PassageIndex::postings_for(std::string_view term) const {
  auto it = postings_.find(term);
  if (it == postings_.end()) return {};
  return it->second;
}

std::uint32_t PassageIndex::term_frequency(std::string_view term,
                                           std::uint32_t passage) const {
  const auto list = postings_for(term);
  auto it = std::lower_bound(list.begin(), list.end(), passage,
                             [](const Posting& p, std::uint32_t id) {
                               return p.passage_id < id;
                             });
  return it != list.end() && it->passage_id == passage ? it->term_frequency : 0;
}

double PassageIndex::idf(std::size_t document_frequency) const {
  const double n = static_cast<double>(size());
  const double df = static_cast<double>(document_frequency);
  return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

double PassageIndex::term_score(double idf_value, std::uint32_t tf,
                                std::uint32_t length) const {
  const double relative =
      avg_len_ > 0.0 ? static_cast<double>(length) / avg_len_ : 0.0;
  const double f = static_cast<double>(tf);
  const double norm = params_.k1 * (1.0 - params_.b + params_.b * relative);
  return idf_value * (f * (params_.k1 + 1.0)) / (f + norm);
}

PassageIndex PassageIndex::with_params(Bm25Params params) const {
  if (!(params.k1 > 0.0) || !(params.b >= 0.0 && params.b <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "BM25 requires k1 > 0 and b in [0, 1]");
  }
  PassageIndex copy = *this;
  copy.params_ = params;
  return copy;
}

RankedList bm25_rank(const PassageIndex& index,
                     std::span<const std::string> query, std::size_t k,
                     std::string query_id) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  RankedList result;
  result.query_id = std::move(query_id);
  std::vector<double> scores(index.size(), 0.0);
  std::vector<char> touched(index.size(), 0);
  for (const auto& term : query) {
    const auto list = index.postings_for(term);
    if (list.empty()) continue;
    const double idf = index.idf(list.size());
    for (const auto& p : list) {
      scores[p.passage_id] +=
          index.term_score(idf, p.term_frequency, index.lengths()[p.passage_id]);
      touched[p.passage_id] = 1;
    }
  }
  for (std::size_t id = 0; id < scores.size(); ++id) {
    if (touched[id] && scores[id] > 0.0) {
      result.entries.push_back({static_cast<std::uint32_t>(id), scores[id]});
    }
  }
  std::sort(result.entries.begin(), result.entries.end(),
            [](const RankedEntry& a, const RankedEntry& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.passage_id < b.passage_id;
            });
  // Different tf/length pairs can score exactly alike in real arithmetic yet
  // differ in the last bits; such runs are ties and go to the smaller id.
  auto& e = result.entries;
  for (std::size_t i = 0; i < e.size();) {
    std::size_t j = i + 1;
    while (j < e.size() && e[i].score - e[j].score <= kTieTolerance * e[i].score) ++j;
    std::sort(e.begin() + static_cast<std::ptrdiff_t>(i), e.begin() + static_cast<std::ptrdiff_t>(j),
              [](const RankedEntry& a, const RankedEntry& b) { return a.passage_id < b.passage_id; });
    i = j;
  }
  if (e.size() > k) e.resize(k);
  return result;
}

const corpus::Passage& first_passage(std::span<const corpus::Passage> passages) {
  if (passages.empty()) {
    throw Error(ErrorCode::EmptyCorpus, "document has no passages");
  }
  return passages.front();
}

corpus::Passage first_passage(const corpus::Document& doc,
                              std::size_t window_size) {
  const auto passages = corpus::build_passages(doc, window_size);
  return first_passage(std::span<const corpus::Passage>(passages));
}

const corpus::Passage& random_passage(std::span<const corpus::Passage> passages,
                                      std::uint64_t seed) {
  if (passages.empty()) {
    throw Error(ErrorCode::EmptyCorpus, "document has no passages");
  }
  Rng rng(seed);
  return passages[rng.index(passages.size())];
}

corpus::Passage random_passage(const corpus::Document& doc, std::uint64_t seed,
                               std::size_t window_size) {
  const auto passages = corpus::build_passages(doc, window_size);
  return random_passage(std::span<const corpus::Passage>(passages), seed);
}

}  // namespace dqa::retrieval
