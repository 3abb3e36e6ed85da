// SPDX-License-Identifier: Apache-2.0
#include "dqa/taxonomy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "dqa/error.hpp"
#include "dqa/random.hpp"
#include "dqa/text.hpp"

namespace dqa::taxonomy {
namespace {

struct Sample {
  std::vector<std::uint32_t> features;
  std::size_t label = 0;
};

template <typename E, std::size_t N>
std::optional<E> parse_enum(std::string_view s, const E (&values)[N]) {
  for (E v : values) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

constexpr L1 kL1[] = {L1::Document, L1::Factoid, L1::Mechanical, L1::Other};
constexpr L2 kL2[] = {L2::YesNo,    L2::Factual,     L2::Navigational,
                      L2::Overview, L2::Summary,     L2::CopyEditing,
                      L2::Elaboration};
constexpr L3 kL3[] = {L3::Factual, L3::Navigational, L3::Overview,
                      L3::Summary, L3::CopyEditing,  L3::Elaboration};

// Mean cross-entropy plus the L2 penalty.
double objective(const Classifier& clf, const std::vector<Sample>& samples,
                 double l2) {
  double loss = 0.0;
  for (const auto& s : samples) {
    const auto z = clf.logits(s.features);
    const double m = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double v : z) sum += std::exp(v - m);
    loss += (m + std::log(sum)) - z[s.label];
  }
  loss /= static_cast<double>(samples.size());
  return loss + 0.5 * l2 * clf.weight_norm_squared();
}

std::string level_key(Level level) { return std::string(to_string(level)); }

}  // namespace

std::string_view to_string(L1 v) {
  switch (v) {
    case L1::Document: return "Document";
    case L1::Factoid: return "Factoid";
    case L1::Mechanical: return "Mechanical";
    case L1::Other: return "Other";
  }
  return "Other";
}

std::string_view to_string(L2 v) {
  switch (v) {
    case L2::YesNo: return "YesNo";
    case L2::Factual: return "Factual";
    case L2::Navigational: return "Navigational";
    case L2::Overview: return "Overview";
    case L2::Summary: return "Summary";
    case L2::CopyEditing: return "CopyEditing";
    case L2::Elaboration: return "Elaboration";
  }
  return "Factual";
}

std::string_view to_string(L3 v) {
  switch (v) {
    case L3::Factual: return "Factual";
    case L3::Navigational: return "Navigational";
    case L3::Overview: return "Overview";
    case L3::Summary: return "Summary";
    case L3::CopyEditing: return "CopyEditing";
    case L3::Elaboration: return "Elaboration";
  }
  return "Factual";
}

std::string_view to_string(Level v) {
  switch (v) {
    case Level::L1: return "L1";
    case Level::L2: return "L2";
    case Level::L3: return "L3";
  }
  return "L1";
}

std::optional<L1> parse_l1(std::string_view s) { return parse_enum(s, kL1); }
std::optional<L2> parse_l2(std::string_view s) { return parse_enum(s, kL2); }
std::optional<L3> parse_l3(std::string_view s) { return parse_enum(s, kL3); }
std::optional<Level> parse_level(std::string_view s) {
  constexpr Level levels[] = {Level::L1, Level::L2, Level::L3};
  return parse_enum(s, levels);
}

const std::vector<std::string>& class_names(Level level) {
  static const auto make = [](auto const& values) {
    std::vector<std::string> out;
    for (auto v : values) out.emplace_back(to_string(v));
    return out;
  };
  static const std::vector<std::string> l1 = make(kL1);
  static const std::vector<std::string> l2 = make(kL2);
  static const std::vector<std::string> l3 = make(kL3);
  switch (level) {
    case Level::L1: return l1;
    case Level::L2: return l2;
    case Level::L3: return l3;
  }
  return l1;
}

void TaxonomyLabel::validate() const {
  if (l2 && l1 != L1::Document) {
    throw Error(ErrorCode::InvalidArgument, "L2 label requires L1 == Document");
  }
  if (l3 && l2 != L2::YesNo) {
    throw Error(ErrorCode::InvalidArgument, "L3 label requires L2 == YesNo");
  }
}

std::optional<std::size_t> class_of(const TaxonomyLabel& label, Level level) {
  switch (level) {
    case Level::L1: return static_cast<std::size_t>(label.l1);
    case Level::L2:
      if (label.l1 == L1::Document && label.l2) return static_cast<std::size_t>(*label.l2);
      return std::nullopt;
    case Level::L3:
      if (label.l2 == L2::YesNo && label.l3) return static_cast<std::size_t>(*label.l3);
      return std::nullopt;
  }
  return std::nullopt;
}

std::vector<std::string> ngrams(std::string_view text) {
  const auto words = text::tokenize(text);
  std::vector<std::string> out(words.begin(), words.end());
  for (std::size_t i = 0; i + 1 < words.size(); ++i) {
    out.push_back(words[i] + " " + words[i + 1]);
  }
  return out;
}

std::vector<std::uint32_t> featurize(std::string_view text,
                                     const Vocabulary& vocabulary) {
  std::vector<std::uint32_t> out;
  for (const auto& g : ngrams(text)) {
    if (auto it = vocabulary.find(g); it != vocabulary.end()) {
      out.push_back(it->second);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> Classifier::logits(
    const std::vector<std::uint32_t>& features) const {
  std::vector<double> z = bias_;
  for (std::size_t c = 0; c < z.size(); ++c) {
    for (auto f : features) z[c] += weights_[c][f];
  }
  return z;
}

double Classifier::weight_norm_squared() const {
  double s = 0.0;
  for (const auto& row : weights_) {
    for (double w : row) s += w * w;
  }
  return s;
}

std::vector<double> softmax(const std::vector<double>& logits) {
  std::vector<double> p(logits.size());
  if (logits.empty()) return p;
  const double m = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - m);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

Prediction Classifier::predict(std::string_view text) const {
  const auto z = logits(featurize(text, vocabulary_));
  Prediction out;
  out.probabilities = softmax(z);
  // Argmax on logits: invariant under a shared shift, first index wins ties.
  out.label = static_cast<std::size_t>(
      std::distance(z.begin(), std::max_element(z.begin(), z.end())));
  return out;
}

Prediction classify(const Classifier& clf, std::string_view text) {
  return clf.predict(text);
}

Classifier train(const std::vector<LabeledQuestion>& data, Level level,
                 const Hyperparams& hyper) {
  const std::size_t num_classes = class_names(level).size();
  std::set<std::size_t> present;
  std::vector<std::pair<const LabeledQuestion*, std::size_t>> usable;
  for (const auto& q : data) {
    if (auto c = class_of(q.label, level)) {
      usable.emplace_back(&q, *c);
      present.insert(*c);
    }
  }
  if (present.size() < 2) {
    throw Error(ErrorCode::DegenerateData,
                "training at " + level_key(level) +
                    " needs at least two classes, found " +
                    std::to_string(present.size()));
  }

  Classifier clf;
  clf.level_ = level;
  clf.hyper_ = hyper;
  std::set<std::string> grams;
  for (const auto& [q, c] : usable) {
    for (auto& g : ngrams(q->text)) grams.insert(std::move(g));
  }
  std::uint32_t next = 0;
  for (const auto& g : grams) clf.vocabulary_.emplace(g, next++);

  std::vector<Sample> samples;
  samples.reserve(usable.size());
  for (const auto& [q, c] : usable) {
    samples.push_back({featurize(q->text, clf.vocabulary_), c});
  }

  const std::size_t vocab = clf.vocabulary_.size();
  clf.weights_.assign(num_classes, std::vector<double>(vocab, 0.0));
  clf.bias_.assign(num_classes, 0.0);
  const double inv_n = 1.0 / static_cast<double>(samples.size());

  double loss = objective(clf, samples, hyper.l2);
  std::vector<std::vector<double>> grad_w(num_classes, std::vector<double>(vocab));
  std::vector<double> grad_b(num_classes);
  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    for (auto& row : grad_w) std::fill(row.begin(), row.end(), 0.0);
    std::fill(grad_b.begin(), grad_b.end(), 0.0);
    for (const auto& s : samples) {
      auto p = softmax(clf.logits(s.features));
      p[s.label] -= 1.0;
      for (std::size_t c = 0; c < num_classes; ++c) {
        const double g = p[c] * inv_n;
        grad_b[c] += g;
        for (auto f : s.features) grad_w[c][f] += g;
      }
    }
    for (std::size_t c = 0; c < num_classes; ++c) {
      for (std::size_t f = 0; f < vocab; ++f) {
        grad_w[c][f] += hyper.l2 * clf.weights_[c][f];
      }
    }

    const auto saved_w = clf.weights_;
    const auto saved_b = clf.bias_;
    double step = hyper.learning_rate;
    double candidate = loss;
    bool accepted = false;
    for (int attempt = 0; attempt < 40; ++attempt) {
      for (std::size_t c = 0; c < num_classes; ++c) {
        for (std::size_t f = 0; f < vocab; ++f) {
          clf.weights_[c][f] = saved_w[c][f] - step * grad_w[c][f];
        }
        clf.bias_[c] = saved_b[c] - step * grad_b[c];
      }
      candidate = objective(clf, samples, hyper.l2);
      if (candidate <= loss) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      clf.weights_ = saved_w;
      clf.bias_ = saved_b;
      clf.loss_history_.push_back(loss);
      break;
    }
    loss = candidate;
    clf.loss_history_.push_back(loss);
  }
  return clf;
}

std::vector<std::vector<std::size_t>> stratified_folds(
    const std::vector<std::size_t>& labels, std::size_t folds,
    std::uint64_t seed) {
  std::map<std::size_t, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  std::vector<std::vector<std::size_t>> out(folds);
  Rng rng(seed);
  std::size_t offset = 0;
  for (auto& [label, members] : by_class) {
    rng.shuffle(std::span<std::size_t>(members));
    for (std::size_t k = 0; k < members.size(); ++k) {
      out[(offset + k) % folds].push_back(members[k]);
    }
    // Continue the round-robin so small classes do not all start at fold 0.
    offset = (offset + members.size()) % folds;
  }
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

CrossValidation cross_validate(const std::vector<LabeledQuestion>& data,
                               Level level, std::size_t folds,
                               const Hyperparams& hyper) {
  if (folds < 2) {
    throw Error(ErrorCode::InvalidArgument, "cross validation needs >= 2 folds");
  }
  std::vector<LabeledQuestion> usable;
  std::vector<std::size_t> labels;
  for (const auto& q : data) {
    if (auto c = class_of(q.label, level)) {
      usable.push_back(q);
      labels.push_back(*c);
    }
  }
  if (usable.size() < folds) {
    throw Error(ErrorCode::DegenerateData,
                "fewer labeled questions than folds at " + level_key(level));
  }
  if (std::set<std::size_t>(labels.begin(), labels.end()).size() < 2) {
    throw Error(ErrorCode::DegenerateData,
                "cross validation at " + level_key(level) + " needs two classes");
  }
  const auto partition = stratified_folds(labels, folds, hyper.seed);
  CrossValidation cv;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<char> held(usable.size(), 0);
    for (auto i : partition[f]) held[i] = 1;
    std::vector<LabeledQuestion> train_set;
    for (std::size_t i = 0; i < usable.size(); ++i) {
      if (!held[i]) train_set.push_back(usable[i]);
    }
    if (partition[f].empty()) continue;
    const Classifier clf = train(train_set, level, hyper);
    std::size_t correct = 0;
    for (auto i : partition[f]) {
      if (clf.predict(usable[i].text).label == labels[i]) ++correct;
    }
    cv.fold_accuracies.push_back(static_cast<double>(correct) /
                                 static_cast<double>(partition[f].size()));
  }
  const double n = static_cast<double>(cv.fold_accuracies.size());
  cv.mean_accuracy =
      std::accumulate(cv.fold_accuracies.begin(), cv.fold_accuracies.end(), 0.0) / n;
  for (double a : cv.fold_accuracies) {
    cv.variance += (a - cv.mean_accuracy) * (a - cv.mean_accuracy);
  }
  cv.variance /= n;
  return cv;
}

TaxonomyModel::Result TaxonomyModel::classify(std::string_view text) const {
  Result r;
  const auto p1 = l1.predict(text);
  r.l1_probabilities = p1.probabilities;
  r.label.l1 = static_cast<L1>(p1.label);
  if (r.label.l1 == L1::Document) {
    const auto p2 = l2.predict(text);
    r.l2_probabilities = p2.probabilities;
    r.label.l2 = static_cast<L2>(p2.label);
    if (r.label.l2 == L2::YesNo) {
      const auto p3 = l3.predict(text);
      r.l3_probabilities = p3.probabilities;
      r.label.l3 = static_cast<L3>(p3.label);
    }
  }
  return r;
}

TaxonomyModel train_model(const std::vector<LabeledQuestion>& data,
                          const Hyperparams& hyper) {
  return {train(data, Level::L1, hyper), train(data, Level::L2, hyper),
          train(data, Level::L3, hyper)};
}

void to_json(nlohmann::json& j, const Classifier& c) {
  j = nlohmann::json{
      {"level", to_string(c.level())},
      {"seed", c.seed()},
      {"classes", class_names(c.level())},
      {"hyperparams",
       {{"l2", c.hyperparams().l2},
        {"epochs", c.hyperparams().epochs},
        {"learning_rate", c.hyperparams().learning_rate}}},
  };
  // Vocabulary as an array ordered by feature index.
  std::vector<std::string> vocab(c.vocabulary().size());
  for (const auto& [g, idx] : c.vocabulary()) vocab[idx] = g;
  j["vocabulary"] = vocab;
  j["weights"] = c.weights();
  j["bias"] = c.bias();
}

void from_json(const nlohmann::json& j, Classifier& c) {
  const auto level = parse_level(j.at("level").get<std::string>());
  if (!level) throw Error(ErrorCode::ParseError, "unknown classifier level");
  c = Classifier{};
  c.level_ = *level;
  c.hyper_.seed = j.value("seed", std::uint64_t{42});
  if (j.contains("hyperparams")) {
    const auto& h = j["hyperparams"];
    c.hyper_.l2 = h.value("l2", c.hyper_.l2);
    c.hyper_.epochs = h.value("epochs", c.hyper_.epochs);
    c.hyper_.learning_rate = h.value("learning_rate", c.hyper_.learning_rate);
  }
  const auto vocab = j.at("vocabulary").get<std::vector<std::string>>();
  for (std::uint32_t i = 0; i < vocab.size(); ++i) c.vocabulary_.emplace(vocab[i], i);
  c.weights_ = j.at("weights").get<std::vector<std::vector<double>>>();
  c.bias_ = j.at("bias").get<std::vector<double>>();
  const std::size_t classes = class_names(c.level_).size();
  if (c.bias_.size() != classes || c.weights_.size() != classes) {
    throw Error(ErrorCode::ParseError, "classifier class count mismatch");
  }
  for (const auto& row : c.weights_) {
    if (row.size() != vocab.size()) {
      throw Error(ErrorCode::ParseError, "weight row length != vocabulary size");
    }
  }
}

void to_json(nlohmann::json& j, const TaxonomyModel& m) {
  j = nlohmann::json{{"format", "dqa.taxonomy/1"}, {"l1", m.l1}, {"l2", m.l2}, {"l3", m.l3}};
}

void from_json(const nlohmann::json& j, TaxonomyModel& m) {
  m.l1 = j.at("l1").get<Classifier>();
  m.l2 = j.at("l2").get<Classifier>();
  m.l3 = j.at("l3").get<Classifier>();
  if (m.l1.level() != Level::L1 || m.l2.level() != Level::L2 ||
      m.l3.level() != Level::L3) {
    throw Error(ErrorCode::ParseError, "taxonomy model levels out of place");
  }
}

void to_json(nlohmann::json& j, const TaxonomyLabel& l) {
  j = nlohmann::json{{"l1", to_string(l.l1)}};
  j["l2"] = l.l2 ? nlohmann::json(std::string(to_string(*l.l2))) : nlohmann::json(nullptr);
  j["l3"] = l.l3 ? nlohmann::json(std::string(to_string(*l.l3))) : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json& j, TaxonomyLabel& l) {
  const auto l1 = parse_l1(j.at("l1").get<std::string>());
  if (!l1) throw Error(ErrorCode::ParseError, "unknown L1 label");
  l.l1 = *l1;
  l.l2.reset();
  l.l3.reset();
  if (j.contains("l2") && j["l2"].is_string()) {
    l.l2 = parse_l2(j["l2"].get<std::string>());
    if (!l.l2) throw Error(ErrorCode::ParseError, "unknown L2 label");
  }
  if (j.contains("l3") && j["l3"].is_string()) {
    l.l3 = parse_l3(j["l3"].get<std::string>());
    if (!l.l3) throw Error(ErrorCode::ParseError, "unknown L3 label");
  }
  l.validate();
}

std::vector<LabeledQuestion> read_labeled_questions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::vector<LabeledQuestion> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      LabeledQuestion q;
      q.text = j.at("text").get<std::string>();
      if (text::trim(q.text).empty()) {
        throw Error(ErrorCode::ParseError, "empty question text");
      }
      q.label = j.get<TaxonomyLabel>();
      out.push_back(std::move(q));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError,
                  path + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.code(), path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_labeled_questions(const std::vector<LabeledQuestion>& data,
                             const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path);
  for (const auto& q : data) {
    nlohmann::json j = q.label;
    j["text"] = q.text;
    out << j.dump() << '\n';
  }
}

TaxonomyModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  try {
    return nlohmann::json::parse(in).get<TaxonomyModel>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

void save_model(const TaxonomyModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path);
  out << nlohmann::json(model).dump() << '\n';
}

}  // namespace dqa::taxonomy
