// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dqa/aggregate.hpp"
#include "dqa/corpus.hpp"
#include "dqa/retrieval.hpp"
#include "dqa/rewrite.hpp"
#include "dqa/taxonomy.hpp"

namespace dqa::assistant {

enum class Handler { Mechanical, Retrieval, Abstain };

std::string_view to_string(Handler h);

/// Why a response abstained. `None` for answered responses.
enum class Reason {
  None,
  LowScore,            ///< top BM25 score below the threshold
  NoSpan,              ///< nothing in the top passage overlaps the query
  OutOfScope,          ///< L1 = Other
  UnsupportedCommand,  ///< mechanical directive outside the rule set
  NotFound,            ///< mechanical target absent from the document
  BackendError,        ///< external extractor failed or returned an unverifiable span
};

std::string_view to_string(Reason r);

inline constexpr std::string_view kNoAnswerMessage = "The document does not contain the answer.";

struct Evidence {
  retrieval::PassageRef passage;
  corpus::AnswerSpan span;
  std::size_t cp_start = 0;  ///< span offsets in code points, for UI clients
  std::size_t cp_end = 0;

  bool operator==(const Evidence&) const = default;
};

struct AnswerResponse {
  std::string answer_text;
  taxonomy::TaxonomyLabel question_type;
  std::optional<aggregate::YesNo> yes_no_prefix;
  std::vector<Evidence> evidence;
  double retrieval_score = 0.0;
  bool abstained = false;
  Handler handler = Handler::Abstain;
  Reason reason = Reason::None;
  std::string rewritten_question;
};

/// Checks the response invariants: abstention has no evidence, a yes/no
/// prefix only on YesNo questions, and every evidence span matches the body.
/// Throws Error(OffsetMismatch) or Error(InvalidArgument).
void verify_response(const AnswerResponse& r, const corpus::Document& doc);

/// Evidence for body range [char_start, char_end) found in passage
/// `passage_index`. Throws Error(SpanOutOfRange).
Evidence make_evidence(const corpus::Document& doc, std::size_t passage_index,
                       std::size_t char_start, std::size_t char_end);

/// L1 → handler: Mechanical → rules, Document/Factoid → retrieval,
/// Other → abstain.
Handler route(const taxonomy::TaxonomyLabel& label);

/// Find-text and navigate/read-section directives; anything else abstains
/// with UnsupportedCommand.
AnswerResponse mechanical_handle(std::string_view question, const corpus::Document& doc);

struct ExtractedSpan {
  std::string text;
  std::size_t char_start = 0;  ///< byte offsets into the document body
  std::size_t char_end = 0;
  double score = 0.0;
};

/// Best 1–3-sentence window of the passage by the number of distinct
/// non-stopword query tokens it contains. Ties prefer fewer sentences, then
/// the earlier window. nullopt when nothing overlaps.
std::optional<ExtractedSpan> extract_span(const corpus::Document& doc,
                                          const corpus::Passage& passage,
                                          std::span<const std::string> query_tokens);

/// Pluggable answer selection over the top passage.
class AnswerExtractor {
 public:
  virtual ~AnswerExtractor() = default;
  /// `question` is the rewritten question. Returned offsets are body offsets;
  /// the caller verifies them.
  virtual std::optional<ExtractedSpan> extract(std::string_view question,
                                               const corpus::Document& doc,
                                               const corpus::Passage& passage) const = 0;
};

class OverlapExtractor final : public AnswerExtractor {
 public:
  std::optional<ExtractedSpan> extract(std::string_view question,
                                       const corpus::Document& doc,
                                       const corpus::Passage& passage) const override;
};

struct AnswerConfig {
  double threshold = 0.5;
  retrieval::Bm25Params bm25;
  std::size_t window = corpus::kDefaultWindow;
};

/// rewrite → bm25_rank(k=1) → extract in the top passage. Abstains below the
/// threshold or when no span is found. Yes/no questions get a Yes prefix with
/// evidence and a No prefix on abstention. `label` is the question's type.
/// `extractor` defaults to OverlapExtractor.
AnswerResponse answer(std::string_view question, const taxonomy::TaxonomyLabel& label,
                      const corpus::Document& doc,
                      std::span<const corpus::Passage> passages,
                      const retrieval::PassageIndex& index,
                      const std::vector<rewrite::RewriteRule>& rules,
                      double threshold = 0.5,
                      const AnswerExtractor* extractor = nullptr);

/// A document prepared for answering; immutable once built.
struct IndexedDocument {
  corpus::Document doc;
  std::vector<corpus::Passage> passages;
  retrieval::PassageIndex index;

  static IndexedDocument build(corpus::Document doc, const AnswerConfig& config = {});
};

/// Classify, route, and answer one question.
AnswerResponse respond(std::string_view question, const IndexedDocument& doc,
                       const taxonomy::TaxonomyModel& model,
                       const std::vector<rewrite::RewriteRule>& rules,
                       const AnswerConfig& config = {},
                       const AnswerExtractor* extractor = nullptr);

struct Turn {
  std::string question;
  AnswerResponse response;
  std::string timestamp;  ///< UTC, ISO 8601
};

/// Append-only turn history bound to one document.
class Session {
 public:
  Session(std::string id, std::string doc_id) : id_(std::move(id)), doc_id_(std::move(doc_id)) {}

  const std::string& id() const { return id_; }
  const std::string& doc_id() const { return doc_id_; }
  void append(Turn turn);
  std::vector<Turn> history() const;

 private:
  std::string id_;
  std::string doc_id_;
  mutable std::mutex mutex_;
  std::vector<Turn> turns_;
};

/// Shared engine behind the CLI and the HTTP server. Documents and models
/// are read-only once added; each session serializes its own appends.
class Assistant {
 public:
  Assistant(taxonomy::TaxonomyModel model, std::vector<rewrite::RewriteRule> rules,
            AnswerConfig config = {}, std::shared_ptr<const AnswerExtractor> extractor = nullptr);

  /// Ingests and indexes a document; returns its id. Re-adding identical
  /// content returns the same id. Throws Error(EmptyDocument).
  std::string add_document(std::string_view title, std::string_view text,
                           corpus::SourceFormat format = corpus::SourceFormat::PlainText);
  std::shared_ptr<const IndexedDocument> document(const std::string& doc_id) const;

  /// Throws Error(NotFound) for an unknown document.
  std::shared_ptr<Session> create_session(const std::string& doc_id);
  std::shared_ptr<Session> session(const std::string& session_id) const;

  /// Answers within a session and records the turn. Throws Error(NotFound).
  AnswerResponse ask(const std::string& session_id, std::string_view question);

  const AnswerConfig& config() const { return config_; }
  const taxonomy::TaxonomyModel& model() const { return model_; }

 private:
  taxonomy::TaxonomyModel model_;
  std::vector<rewrite::RewriteRule> rules_;
  AnswerConfig config_;
  std::shared_ptr<const AnswerExtractor> extractor_;

  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<const IndexedDocument>> documents_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_session_ = 1;
};

std::string utc_timestamp();

void to_json(nlohmann::json& j, const Evidence& e);
void to_json(nlohmann::json& j, const AnswerResponse& r);
void to_json(nlohmann::json& j, const Turn& t);

}  // namespace dqa::assistant
