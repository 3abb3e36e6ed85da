// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace dqa::taxonomy {

/// Level 1: what kind of system should respond.
enum class L1 { Document, Factoid, Mechanical, Other };

/// Level 2: intent of a document-centered question.
enum class L2 {
  YesNo,
  Factual,
  Navigational,
  Overview,
  Summary,
  CopyEditing,
  Elaboration
};

/// Level 3: the intent behind a yes/no question (L2 without YesNo).
enum class L3 { Factual, Navigational, Overview, Summary, CopyEditing, Elaboration };

enum class Level { L1, L2, L3 };

std::string_view to_string(L1 v);
std::string_view to_string(L2 v);
std::string_view to_string(L3 v);
std::string_view to_string(Level v);
std::optional<L1> parse_l1(std::string_view s);
std::optional<L2> parse_l2(std::string_view s);
std::optional<L3> parse_l3(std::string_view s);
std::optional<Level> parse_level(std::string_view s);

/// Class names of a level in enum order.
const std::vector<std::string>& class_names(Level level);

struct TaxonomyLabel {
  L1 l1 = L1::Other;
  std::optional<L2> l2;  ///< only when l1 == Document
  std::optional<L3> l3;  ///< only when l2 == YesNo

  /// Enforces the hierarchy; throws Error(InvalidArgument) when violated.
  void validate() const;
  bool operator==(const TaxonomyLabel&) const = default;
};

struct LabeledQuestion {
  std::string text;
  TaxonomyLabel label;

  bool operator==(const LabeledQuestion&) const = default;
};

/// Class id of a question at a level, or nullopt when the question has no
/// label there (e.g. a Factoid question at L2).
std::optional<std::size_t> class_of(const TaxonomyLabel& label, Level level);

using Vocabulary = std::map<std::string, std::uint32_t, std::less<>>;

/// Lowercased, punctuation-stripped word 1- and 2-grams.
std::vector<std::string> ngrams(std::string_view text);

/// Sorted, de-duplicated indices of the in-vocabulary n-grams present in the
/// text (a binary presence vector in sparse form).
std::vector<std::uint32_t> featurize(std::string_view text,
                                     const Vocabulary& vocabulary);

struct Hyperparams {
  double l2 = 1e-3;
  std::size_t epochs = 500;
  double learning_rate = 0.1;
  std::uint64_t seed = 42;

  bool operator==(const Hyperparams&) const = default;
};

struct Prediction {
  std::size_t label = 0;
  std::vector<double> probabilities;
};

/// Multinomial logistic regression over binary n-gram features.
class Classifier {
 public:
  Level level() const { return level_; }
  std::uint64_t seed() const { return hyper_.seed; }
  const Hyperparams& hyperparams() const { return hyper_; }
  const Vocabulary& vocabulary() const { return vocabulary_; }
  const std::vector<std::vector<double>>& weights() const { return weights_; }
  const std::vector<double>& bias() const { return bias_; }
  /// Mean training loss after each epoch (empty for a deserialized model).
  const std::vector<double>& loss_history() const { return loss_history_; }
  std::size_t num_classes() const { return bias_.size(); }

  /// Class logits for a sparse feature vector.
  std::vector<double> logits(const std::vector<std::uint32_t>& features) const;
  Prediction predict(std::string_view text) const;

  /// Squared L2 norm of all weights (bias excluded).
  double weight_norm_squared() const;

  bool operator==(const Classifier&) const = default;

  friend Classifier train(const std::vector<LabeledQuestion>& data, Level level,
                          const Hyperparams& hyper);
  friend void from_json(const nlohmann::json& j, Classifier& c);

 private:
  Level level_ = Level::L1;
  Hyperparams hyper_;
  Vocabulary vocabulary_;
  std::vector<std::vector<double>> weights_;  ///< [class][feature]
  std::vector<double> bias_;
  std::vector<double> loss_history_;
};

/// Full-batch gradient descent on mean cross-entropy plus (l2 / 2)·||W||².
/// Questions without a label at the level are ignored. A step that would
/// raise the loss is retried with half the step size, so the recorded loss
/// never increases. Throws Error(DegenerateData) with fewer than two classes.
Classifier train(const std::vector<LabeledQuestion>& data, Level level,
                 const Hyperparams& hyper = {});

/// Softmax probabilities; the label is the argmax, ties to the lower class.
Prediction classify(const Classifier& clf, std::string_view text);

/// Numerically stable softmax.
std::vector<double> softmax(const std::vector<double>& logits);

struct CrossValidation {
  double mean_accuracy = 0.0;
  double variance = 0.0;  ///< population variance of fold accuracies
  std::vector<double> fold_accuracies;
};

/// Stratified fold assignment: a disjoint cover of `labels`' indices.
std::vector<std::vector<std::size_t>> stratified_folds(
    const std::vector<std::size_t>& labels, std::size_t folds,
    std::uint64_t seed);

CrossValidation cross_validate(const std::vector<LabeledQuestion>& data,
                               Level level, std::size_t folds = 5,
                               const Hyperparams& hyper = {});

/// The three per-level classifiers composed under the hierarchy.
struct TaxonomyModel {
  Classifier l1;
  Classifier l2;
  Classifier l3;

  struct Result {
    TaxonomyLabel label;
    std::vector<double> l1_probabilities;
    std::vector<double> l2_probabilities;  ///< empty unless l1 == Document
    std::vector<double> l3_probabilities;  ///< empty unless l2 == YesNo
  };

  /// L2 is consulted only for Document questions, L3 only for YesNo.
  Result classify(std::string_view text) const;
};

TaxonomyModel train_model(const std::vector<LabeledQuestion>& data,
                          const Hyperparams& hyper = {});

void to_json(nlohmann::json& j, const Classifier& c);
void from_json(const nlohmann::json& j, Classifier& c);
void to_json(nlohmann::json& j, const TaxonomyModel& m);
void from_json(const nlohmann::json& j, TaxonomyModel& m);
void to_json(nlohmann::json& j, const TaxonomyLabel& l);
void from_json(const nlohmann::json& j, TaxonomyLabel& l);

/// JSONL with {text, l1, l2, l3}; l2/l3 null or absent when not applicable.
std::vector<LabeledQuestion> read_labeled_questions(const std::string& path);
void write_labeled_questions(const std::vector<LabeledQuestion>& data,
                             const std::string& path);

TaxonomyModel load_model(const std::string& path);
void save_model(const TaxonomyModel& model, const std::string& path);

}  // namespace dqa::taxonomy
