// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dqa/corpus.hpp"

namespace dqa::retrieval {

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;

  bool operator==(const Bm25Params&) const = default;
};

struct Posting {
  std::uint32_t passage_id = 0;
  std::uint32_t term_frequency = 0;

  bool operator==(const Posting&) const = default;
};

/// Which document passage a global passage id refers to.
struct PassageRef {
  std::string doc_id;
  std::uint32_t passage_index = 0;

  bool operator==(const PassageRef&) const = default;
};

/// Immutable inverted index. Passage ids are positions in the list the index
/// was built from.
class PassageIndex {
 public:
  /// Throws Error(EmptyCorpus) for an empty list and Error(InvalidArgument)
  /// for k1 <= 0 or b outside [0, 1].
  static PassageIndex build(std::span<const corpus::Passage> passages,
                            Bm25Params params = {});

  std::size_t size() const { return lengths_.size(); }
  double average_length() const { return avg_len_; }
  const Bm25Params& params() const { return params_; }
  const std::vector<std::uint32_t>& lengths() const { return lengths_; }
  const std::vector<PassageRef>& refs() const { return refs_; }
  const std::map<std::string, std::vector<Posting>, std::less<>>& postings() const {
    return postings_;
  }

  /// Postings of a term, empty if unseen.
  std::span<const Posting> postings_for(std::string_view term) const;
  std::uint32_t term_frequency(std::string_view term, std::uint32_t passage) const;

  /// Inverse document frequency, ln(1 + (N - df + 0.5) / (df + 0.5)).
  double idf(std::size_t document_frequency) const;

  /// Contribution of one query-term occurrence with the given tf to a
  /// passage of the given length.
  double term_score(double idf, std::uint32_t tf, std::uint32_t length) const;

  /// Returns a copy with different scoring parameters.
  PassageIndex with_params(Bm25Params params) const;

  bool operator==(const PassageIndex&) const = default;

 private:
  friend PassageIndex read_index(const std::string& path);

  std::map<std::string, std::vector<Posting>, std::less<>> postings_;
  std::vector<std::uint32_t> lengths_;
  std::vector<PassageRef> refs_;
  double avg_len_ = 0.0;
  Bm25Params params_;
};

struct RankedEntry {
  std::uint32_t passage_id = 0;
  double score = 0.0;

  bool operator==(const RankedEntry&) const = default;
};

struct RankedList {
  std::string query_id;
  std::vector<RankedEntry> entries;
};

/// Relative score difference under which two passages count as tied.
inline constexpr double kTieTolerance = 1e-12;

/// Top-k passages by BM25. Each query token occurrence contributes, so a
/// repeated query word counts repeatedly. Zero-score passages are omitted;
/// ties (up to kTieTolerance) go to the smaller passage id. Throws
/// Error(InvalidArgument) if k == 0.
RankedList bm25_rank(const PassageIndex& index,
                     std::span<const std::string> query, std::size_t k,
                     std::string query_id = {});

/// Passage 0 of the document. Throws Error(EmptyCorpus) if there is none.
const corpus::Passage& first_passage(std::span<const corpus::Passage> passages);
corpus::Passage first_passage(const corpus::Document& doc,
                              std::size_t window_size = corpus::kDefaultWindow);

/// Uniformly chosen passage; deterministic for a given seed.
const corpus::Passage& random_passage(std::span<const corpus::Passage> passages,
                                      std::uint64_t seed);
corpus::Passage random_passage(const corpus::Document& doc, std::uint64_t seed,
                               std::size_t window_size = corpus::kDefaultWindow);

/// Binary file with magic "DQAIDX1" and a little-endian layout.
void write_index(const PassageIndex& index, const std::string& path);
PassageIndex read_index(const std::string& path);

}  // namespace dqa::retrieval
