// SPDX-License-Identifier: Apache-2.0
#include "dqa/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "dqa/error.hpp"
#include "dqa/random.hpp"
#include "dqa/retrieval.hpp"
#include "dqa/text.hpp"

namespace dqa::aggregate {
namespace {

// Keeps the records whose vote equals the decision.
template <typename Pred>
std::vector<AnnotationRecord> keep_if(std::vector<AnnotationRecord> records,
                                      Pred agrees) {
  std::erase_if(records, [&](const AnnotationRecord& r) { return !agrees(r); });
  return records;
}

double pct(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0
                    : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

double ratio(double num, std::size_t den, bool& undefined) {
  if (den == 0) {
    undefined = true;
    return 0.0;
  }
  return num / static_cast<double>(den);
}

}  // namespace

std::string_view to_string(YesNo v) { return v == YesNo::Yes ? "yes" : "no"; }

void AnnotationRecord::validate() const {
  if (spans.size() > 3) {
    throw Error(ErrorCode::InvalidArgument,
                "record " + question_id + "/" + worker_id + " has more than three spans");
  }
  for (const auto& s : spans) {
    if (text::codepoint_length(s.text) > corpus::kMaxSpanChars) {
      throw Error(ErrorCode::InvalidArgument,
                  "span longer than 700 characters in " + question_id + "/" + worker_id);
    }
  }
  if (invalid || spans.empty()) return;
  const bool may_have_spans = is_yes_no ? !no_evidence : has_answer;
  if (!may_have_spans) {
    throw Error(ErrorCode::InvalidArgument,
                "record " + question_id + "/" + worker_id +
                    " carries spans but reports no answer or evidence");
  }
}

RecordGroups group_by_question(const std::vector<AnnotationRecord>& records) {
  RecordGroups groups;
  for (const auto& r : records) groups[r.question_id].push_back(r);
  return groups;
}

FilterResult filter_invalid(const RecordGroups& groups) {
  FilterResult out;
  for (const auto& [qid, records] : groups) {
    const auto flagged = static_cast<std::size_t>(std::count_if(
        records.begin(), records.end(),
        [](const AnnotationRecord& r) { return r.invalid; }));
    if (records.empty() || 2 * flagged >= records.size()) {
      out.discarded.push_back(qid);
      continue;
    }
    auto kept = records;
    std::erase_if(kept, [](const AnnotationRecord& r) { return r.invalid; });
    out.kept.emplace(qid, std::move(kept));
  }
  return out;
}

ConsolidatedQuestion consolidate(const std::vector<AnnotationRecord>& records) {
  if (records.empty()) {
    throw Error(ErrorCode::EmptyAfterFiltering, "no records to consolidate");
  }
  for (const auto& r : records) {
    if (r.question_id != records.front().question_id) {
      throw Error(ErrorCode::InvalidArgument,
                  "consolidate called with mixed question ids");
    }
    r.validate();
  }
  ConsolidatedQuestion cq;
  cq.question_id = records.front().question_id;
  cq.doc_id = records.front().doc_id;
  cq.text = records.front().question;

  auto count = [](const std::vector<AnnotationRecord>& rs, auto pred) {
    return static_cast<std::size_t>(std::count_if(rs.begin(), rs.end(), pred));
  };

  // Stage 1: yes/no question or not; ties count as yes/no.
  const std::size_t yn = count(records, [](const auto& r) { return r.is_yes_no; });
  cq.is_yes_no = yn >= records.size() - yn;
  auto kept = keep_if(records, [&](const auto& r) { return r.is_yes_no == cq.is_yes_no; });

  if (cq.is_yes_no) {
    // Stage 2a: the answer itself; ties become "yes".
    const std::size_t yes = count(kept, [](const auto& r) { return r.yes_no_answer == YesNo::Yes; });
    const std::size_t no = count(kept, [](const auto& r) { return r.yes_no_answer == YesNo::No; });
    cq.yes_no_answer = yes >= no ? YesNo::Yes : YesNo::No;
    kept = keep_if(std::move(kept), [&](const auto& r) { return r.yes_no_answer == cq.yes_no_answer; });
    // Stage 2b: evidence; ties include the spans.
    const std::size_t none = count(kept, [](const auto& r) { return r.no_evidence; });
    const bool no_evidence = none > kept.size() - none;
    kept = keep_if(std::move(kept), [&](const auto& r) { return r.no_evidence == no_evidence; });
    cq.has_evidence = !no_evidence;
    cq.is_impossible = no_evidence;
  } else {
    // Stage 3: does the document contain the answer; ties say it does.
    const std::size_t has = count(kept, [](const auto& r) { return r.has_answer; });
    const bool has_answer = has >= kept.size() - has;
    kept = keep_if(std::move(kept), [&](const auto& r) { return r.has_answer == has_answer; });
    cq.has_evidence = has_answer;
    cq.is_impossible = !has_answer;
  }
  if (kept.empty()) {
    throw Error(ErrorCode::EmptyAfterFiltering,
                "every record of " + cq.question_id + " was dropped");
  }
  cq.kept_records = std::move(kept);
  return cq;
}

std::vector<TrainingExample> expand_examples(const ConsolidatedQuestion& cq,
                                             const corpus::Document& doc,
                                             std::size_t window_size) {
  if (cq.doc_id != doc.id) {
    throw Error(ErrorCode::DocumentMismatch,
                "question " + cq.question_id + " belongs to " + cq.doc_id);
  }
  const auto passages = corpus::build_passages(doc, window_size);
  std::vector<TrainingExample> out;
  auto base = [&](std::size_t n) {
    TrainingExample ex;
    ex.id = cq.question_id + "-" + std::to_string(n);
    ex.question_id = cq.question_id;
    ex.question = cq.text;
    ex.doc_id = cq.doc_id;
    ex.is_yes_no = cq.is_yes_no;
    ex.yes_no_answer = cq.yes_no_answer;
    return ex;
  };

  if (cq.is_impossible) {
    const auto index = retrieval::PassageIndex::build(passages);
    const auto query = text::tokenize(cq.text);
    const auto ranked = retrieval::bm25_rank(index, query, 1);
    const auto& p = ranked.entries.empty() ? passages.front()
                                           : passages[ranked.entries.front().passage_id];
    TrainingExample ex = base(0);
    ex.worker_id = cq.kept_records.front().worker_id;
    ex.context = p.text;
    ex.context_offset = p.char_start;
    ex.passage_index = p.index;
    ex.is_impossible = true;
    out.push_back(std::move(ex));
    return out;
  }

  for (const auto& record : cq.kept_records) {
    for (const auto& span : record.spans) {
      if (span.char_end > doc.body.size() || span.char_start >= span.char_end ||
          doc.body.compare(span.char_start, span.char_end - span.char_start,
                           span.text) != 0) {
        throw Error(ErrorCode::OffsetMismatch,
                    "span of " + cq.question_id + "/" + record.worker_id +
                        " does not match document " + doc.id);
      }
      TrainingExample ex = base(out.size());
      ex.worker_id = record.worker_id;
      auto it = std::find_if(passages.begin(), passages.end(), [&](const auto& p) {
        return p.char_start <= span.char_start && span.char_end <= p.char_end;
      });
      if (it != passages.end()) {
        ex.context = it->text;
        ex.context_offset = it->char_start;
        ex.passage_index = it->index;
      } else {
        // Wider than any window: use the sentence range covering the span.
        std::size_t first = corpus::sentence_at(doc, span.char_start);
        std::size_t last = corpus::sentence_at(doc, span.char_end - 1);
        if (first == std::string::npos) first = 0;
        if (last == std::string::npos) last = first;
        ex.context_offset = std::min(doc.sentences[first].char_start, span.char_start);
        const std::size_t end = std::max(doc.sentences[last].char_end, span.char_end);
        ex.context = doc.body.substr(ex.context_offset, end - ex.context_offset);
        ex.passage_index = std::min(first, passages.size() - 1);
      }
      ex.answer_text = span.text;
      ex.answer_start = span.char_start - ex.context_offset;
      out.push_back(std::move(ex));
    }
  }
  return out;
}

Split holdout_split(const std::vector<std::string>& doc_ids, double fraction,
                    std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "hold-out fraction must be in (0, 1)");
  }
  const std::size_t n = doc_ids.size();
  const auto holdout_count = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n))));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<char> held(n, 0);
  for (std::size_t i = 0; i < holdout_count; ++i) held[order[i]] = 1;
  Split split;
  for (std::size_t i = 0; i < n; ++i) {
    (held[i] ? split.holdout : split.train).push_back(doc_ids[i]);
  }
  return split;
}

AggregationResult aggregate_records(const std::vector<AnnotationRecord>& records) {
  AggregationResult out;
  const auto filtered = filter_invalid(group_by_question(records));
  out.invalid_discarded = filtered.discarded.size();
  for (const auto& [qid, group] : filtered.kept) {
    try {
      out.questions.push_back(consolidate(group));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EmptyAfterFiltering) throw;
      ++out.emptied;
    }
  }
  return out;
}

DatasetStats dataset_stats(const AggregationResult& aggregated) {
  DatasetStats s;
  std::set<std::string> docs;
  std::size_t span_tokens = 0;
  for (const auto& q : aggregated.questions) {
    docs.insert(q.doc_id);
    ++s.valid_questions;
    if (q.is_yes_no) {
      ++s.yes_no_questions;
      if (!q.has_evidence) ++s.no_evidence;
    } else {
      ++s.open_questions;
    }
    if (q.is_impossible) ++s.no_answer;
    std::size_t spans = 0;
    for (const auto& r : q.kept_records) {
      spans += r.spans.size();
      for (const auto& sp : r.spans) span_tokens += text::tokenize(sp.text).size();
    }
    s.total_spans += spans;
    if (spans > 0) ++s.answered_questions;
  }
  s.annotated_documents = docs.size();
  s.invalid_questions = aggregated.invalid_discarded;
  s.open_pct = pct(s.open_questions, s.valid_questions);
  s.yes_no_pct = pct(s.yes_no_questions, s.valid_questions);
  s.no_answer_pct = pct(s.no_answer, s.valid_questions);
  s.no_evidence_pct = pct(s.no_evidence, s.yes_no_questions);

  bool undefined = false;
  const auto spans = static_cast<double>(s.total_spans);
  const auto tokens = static_cast<double>(span_tokens);
  s.avg_spans_per_question = ratio(spans, s.valid_questions, undefined);
  s.avg_spans_per_answered_question = ratio(spans, s.answered_questions, undefined);
  s.avg_span_tokens_per_question = ratio(tokens, s.valid_questions, undefined);
  s.avg_span_tokens_answered = ratio(tokens, s.total_spans, undefined);
  s.undefined_averages = undefined;
  return s;
}

}  // namespace dqa::aggregate
