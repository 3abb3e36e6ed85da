// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dqa/aggregate.hpp"
#include "dqa/corpus.hpp"
#include "dqa/taxonomy.hpp"

namespace dqa::synthetic {

enum class Placement {
  Uniform,        ///< answer sentence drawn uniformly from the document
  FirstSentence,  ///< gold and every worker span in sentence 0: only passage 0 answers
};

struct SyntheticSpec {
  std::size_t n_docs = 10;
  std::size_t sentences_per_doc = 20;
  std::size_t vocab_size = 2000;
  std::size_t questions_per_doc = 10;
  std::uint64_t seed = 42;
  double unanswerable_fraction = 0.40;
  double yes_no_fraction = 0.42;
  double invalid_fraction = 0.02;
  double worker_accuracy = 0.9;
  std::size_t workers_per_question = 3;
  std::size_t worker_pool = 23;
  Placement placement = Placement::Uniform;

  /// Throws Error(InvalidArgument) for zero counts or fractions outside [0, 1].
  void validate() const;
};

/// Ground truth for one generated question.
struct PlantedQuestion {
  std::string question_id;
  std::string doc_id;
  std::string text;
  taxonomy::TaxonomyLabel label;
  bool answerable = false;
  bool is_yes_no = false;
  bool invalid = false;             ///< workers were told to flag it
  std::size_t gold_sentence = 0;    ///< meaningful when answerable
  corpus::AnswerSpan gold_span;     ///< the whole gold sentence
};

struct SyntheticCorpus {
  std::vector<corpus::Document> documents;
  std::vector<PlantedQuestion> questions;
  std::vector<taxonomy::LabeledQuestion> labeled;  ///< text + label per question
  std::vector<aggregate::AnnotationRecord> annotations;
};

/// Deterministic for a given spec. Documents are built from pseudo-words;
/// answerable questions quote distinctive words of their gold sentence,
/// unanswerable ones use words that occur in no document.
SyntheticCorpus generate_synthetic(const SyntheticSpec& spec);

struct TemplateSpec {
  std::size_t per_class = 80;  ///< questions per L2 class; L1 classes scale with it
  std::uint64_t seed = 42;
};

/// Template question bank covering every L1, L2 and L3 class with
/// class-specific keywords.
std::vector<taxonomy::LabeledQuestion> template_questions(const TemplateSpec& spec = {});

/// Copy of `data` where round(rate * eligible) questions get a label drawn
/// uniformly from the classes of `level` (which may equal the old one);
/// lower levels are re-derived to keep the hierarchy valid.
std::vector<taxonomy::LabeledQuestion> with_label_noise(
    const std::vector<taxonomy::LabeledQuestion>& data, taxonomy::Level level,
    double rate, std::uint64_t seed);

/// Keyword-free pseudo-word texts with uniformly random L1 labels.
std::vector<taxonomy::LabeledQuestion> random_label_questions(std::size_t n,
                                                              std::uint64_t seed);

/// Default classifier stack, trained on template_questions() with seed 42.
taxonomy::TaxonomyModel default_model();

}  // namespace dqa::synthetic
