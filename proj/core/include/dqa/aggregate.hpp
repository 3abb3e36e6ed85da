// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dqa/corpus.hpp"

namespace dqa::aggregate {

enum class YesNo { Yes, No };

std::string_view to_string(YesNo v);

inline constexpr std::string_view kAnnotationSchema = "dqa.annotation/1";

/// One worker's judgment of one question.
struct AnnotationRecord {
  std::string question_id;
  std::string doc_id;
  std::string question;
  std::string worker_id;
  bool invalid = false;              ///< "does not make sense"
  bool is_yes_no = false;
  std::optional<YesNo> yes_no_answer;
  bool no_evidence = false;          ///< yes/no: evidence cannot be highlighted
  bool has_answer = true;            ///< false: "document does not contain the answer"
  std::vector<corpus::AnswerSpan> spans;  ///< at most three
  bool hard = false;

  /// Throws Error(InvalidArgument) on more than three spans, a span longer
  /// than 700 characters, or spans on a record that should carry none.
  void validate() const;
  bool operator==(const AnnotationRecord&) const = default;
};

struct ConsolidatedQuestion {
  std::string question_id;
  std::string doc_id;
  std::string text;
  bool is_yes_no = false;
  std::optional<YesNo> yes_no_answer;
  bool has_evidence = false;
  bool is_impossible = false;
  std::vector<AnnotationRecord> kept_records;
};

struct TrainingExample {
  std::string id;
  std::string question_id;
  std::string question;
  std::string doc_id;
  std::string worker_id;
  std::string context;              ///< passage text
  std::size_t context_offset = 0;   ///< byte offset of the context in the body
  std::size_t passage_index = 0;
  std::string answer_text;          ///< empty when impossible
  std::size_t answer_start = 0;     ///< byte offset inside context
  bool is_impossible = false;
  bool is_yes_no = false;
  std::optional<YesNo> yes_no_answer;
};

using RecordGroups = std::map<std::string, std::vector<AnnotationRecord>>;

/// Groups records by question id (ordered by id).
RecordGroups group_by_question(const std::vector<AnnotationRecord>& records);

struct FilterResult {
  RecordGroups kept;
  std::vector<std::string> discarded;  ///< question ids
};

/// Drops questions whose workers mostly (or exactly half) flagged them
/// invalid. In surviving questions the invalid-flagging records are removed.
FilterResult filter_invalid(const RecordGroups& groups);

/// Majority-vote cascade with fixed tie-breaking: ties make the question
/// yes/no, the answer "yes", spans included, and the answer present.
/// Records disagreeing with a decision are dropped at that stage.
/// Throws Error(EmptyAfterFiltering) if nothing survives and
/// Error(InvalidArgument) for mixed question ids.
ConsolidatedQuestion consolidate(const std::vector<AnnotationRecord>& records);

/// One example per (kept record, span). Answerable spans are placed in the
/// first passage that contains them entirely; an impossible question yields
/// a single example whose context is its best BM25 passage.
std::vector<TrainingExample> expand_examples(
    const ConsolidatedQuestion& cq, const corpus::Document& doc,
    std::size_t window_size = corpus::kDefaultWindow);

struct Split {
  std::vector<std::string> train;
  std::vector<std::string> holdout;
};

/// Document-level split; round(fraction * n) documents are held out.
/// Both lists keep the input order. Throws Error(InvalidArgument) unless
/// 0 < fraction < 1.
Split holdout_split(const std::vector<std::string>& doc_ids, double fraction,
                    std::uint64_t seed);

struct AggregationResult {
  std::vector<ConsolidatedQuestion> questions;  ///< ordered by question id
  std::size_t invalid_discarded = 0;
  std::size_t emptied = 0;  ///< questions lost to EmptyAfterFiltering
};

/// filter_invalid followed by consolidate on every group.
AggregationResult aggregate_records(const std::vector<AnnotationRecord>& records);

struct DatasetStats {
  std::size_t annotated_documents = 0;
  std::size_t valid_questions = 0;
  std::size_t invalid_questions = 0;
  std::size_t open_questions = 0;
  std::size_t yes_no_questions = 0;
  std::size_t no_answer = 0;       ///< impossible questions of either kind
  std::size_t no_evidence = 0;     ///< yes/no questions without evidence
  double open_pct = 0.0;           ///< of valid questions
  double yes_no_pct = 0.0;
  double no_answer_pct = 0.0;      ///< of valid questions
  double no_evidence_pct = 0.0;    ///< of yes/no questions

  std::size_t total_spans = 0;
  std::size_t answered_questions = 0;      ///< questions with at least one span
  double avg_spans_per_question = 0.0;
  double avg_spans_per_answered_question = 0.0;
  double avg_span_tokens_per_question = 0.0;  ///< span tokens / all questions
  double avg_span_tokens_answered = 0.0;      ///< span tokens / spans
  bool undefined_averages = false;  ///< set when a denominator was zero
};

DatasetStats dataset_stats(const AggregationResult& aggregated);

void to_json(nlohmann::json& j, const DatasetStats& s);

void to_json(nlohmann::json& j, const AnnotationRecord& r);
void from_json(const nlohmann::json& j, AnnotationRecord& r);
void to_json(nlohmann::json& j, const ConsolidatedQuestion& q);

/// Raw annotation JSONL, one record per line, each with a `schema` field.
std::vector<AnnotationRecord> read_annotations(const std::string& path);
void write_annotations(const std::vector<AnnotationRecord>& records,
                       const std::string& path);

}  // namespace dqa::aggregate
