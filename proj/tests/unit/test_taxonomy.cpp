// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>

#include <nlohmann/json.hpp>

#include "dqa/error.hpp"
#include "dqa/synthetic.hpp"
#include "dqa/taxonomy.hpp"

using namespace dqa;
using namespace dqa::taxonomy;

namespace {

LabeledQuestion q(std::string text, L1 l1) { return {std::move(text), {l1, {}, {}}}; }

double training_accuracy(const Classifier& c, const std::vector<LabeledQuestion>& data) {
  std::size_t ok = 0;
  for (const auto& d : data) ok += classify(c, d.text).label == *class_of(d.label, c.level());
  return static_cast<double>(ok) / static_cast<double>(data.size());
}

}  // namespace

TEST_CASE("label hierarchy validation") {
  CHECK_NOTHROW((TaxonomyLabel{L1::Factoid, {}, {}}.validate()));
  CHECK_NOTHROW((TaxonomyLabel{L1::Document, L2::YesNo, L3::Factual}.validate()));
  CHECK_THROWS_AS((TaxonomyLabel{L1::Factoid, L2::Summary, {}}.validate()), Error);
  CHECK_THROWS_AS((TaxonomyLabel{L1::Document, L2::Summary, L3::Factual}.validate()), Error);
  CHECK(class_names(Level::L1).size() == 4);
  CHECK(class_names(Level::L2).size() == 7);
  CHECK(class_names(Level::L3).size() == 6);
  CHECK(*parse_l2("CopyEditing") == L2::CopyEditing);
}

TEST_CASE("featurize") {
  const Vocabulary vocab{{"go", 0}, {"go to", 1}, {"section", 2}};
  CHECK(featurize("go to section 2", vocab) == std::vector<std::uint32_t>{0, 1, 2});
  CHECK(featurize("", vocab).empty());
  CHECK(featurize("section section", vocab) == featurize("section", vocab));
  CHECK(ngrams("Go, to!") == std::vector<std::string>{"go", "to", "go to"});
}

TEST_CASE("separable data trains to perfect accuracy, deterministically") {
  std::vector<LabeledQuestion> data;
  for (int i = 0; i < 10; ++i) {
    data.push_back(q("highlight word " + std::to_string(i), L1::Mechanical));
    data.push_back(q("what is the capital number " + std::to_string(i), L1::Factoid));
  }
  const auto a = train(data, Level::L1);
  CHECK(training_accuracy(a, data) == 1.0);
  CHECK(train(data, Level::L1) == a);
  const auto& loss = a.loss_history();
  for (std::size_t i = 1; i < loss.size(); ++i) CHECK(loss[i] <= loss[i - 1]);
}

TEST_CASE("conflicting labels cannot beat the majority prior") {
  std::vector<LabeledQuestion> data;
  for (int i = 0; i < 6; ++i) data.push_back(q("same words", L1::Factoid));
  for (int i = 0; i < 4; ++i) data.push_back(q("same words", L1::Other));
  CHECK(training_accuracy(train(data, Level::L1), data) <= 0.6);
}

TEST_CASE("fewer than two classes is degenerate") {
  std::vector<LabeledQuestion> data{q("a", L1::Other), q("b", L1::Other)};
  CHECK_THROWS_AS(train(data, Level::L1), Error);
}

TEST_CASE("stratified folds cover every index once") {
  std::vector<std::size_t> labels;
  for (std::size_t i = 0; i < 53; ++i) labels.push_back(i % 3);
  const auto folds = stratified_folds(labels, 5, 7);
  REQUIRE(folds.size() == 5);
  std::vector<int> seen(labels.size());
  for (const auto& f : folds)
    for (auto i : f) ++seen[i];
  for (int s : seen) CHECK(s == 1);
}

TEST_CASE("cross validation on separable and random data") {
  std::vector<LabeledQuestion> data;
  for (int i = 0; i < 20; ++i) {
    data.push_back(q("highlight word " + std::to_string(i), L1::Mechanical));
    data.push_back(q("what is the capital " + std::to_string(i), L1::Factoid));
  }
  const auto cv = cross_validate(data, Level::L1, 5);
  CHECK(cv.mean_accuracy == 1.0);
  CHECK(cv.variance == 0.0);

  const auto noise = synthetic::random_label_questions(400, 3);
  const auto rcv = cross_validate(noise, Level::L1, 5, {1e-3, 100, 0.1, 42});
  CHECK(std::abs(rcv.mean_accuracy - 0.25) <= 0.1);
}

TEST_CASE("default model classifies the reference questions") {
  const auto model = synthetic::default_model();
  auto r = model.classify("Does the document state who is teaching the course?");
  CHECK(r.label.l1 == L1::Document);
  CHECK(r.label.l2 == L2::YesNo);
  CHECK(r.label.l3.has_value());
  CHECK(model.classify("What is the date of the festival?").label.l1 == L1::Factoid);
  CHECK(model.classify("Highlight ``Capability workers''").label.l1 == L1::Mechanical);
  CHECK(model.classify("Read the email to me.").label.l1 == L1::Other);
  CHECK_NOTHROW(model.classify("").label.validate());
}

TEST_CASE("model and labeled data serialize losslessly") {
  const auto data = synthetic::template_questions({10, 1});
  const auto model = train_model(data, {1e-3, 20, 0.1, 42});
  const auto dir = std::filesystem::temp_directory_path();
  const auto mpath = (dir / "dqa_model_test.json").string();
  save_model(model, mpath);
  const auto back = load_model(mpath);
  CHECK(back.l1.weights() == model.l1.weights());
  CHECK(back.l2.vocabulary() == model.l2.vocabulary());
  CHECK(back.l3.bias() == model.l3.bias());
  const std::string text = data.front().text;
  CHECK(back.classify(text).l1_probabilities == model.classify(text).l1_probabilities);

  const auto qpath = (dir / "dqa_questions_test.jsonl").string();
  write_labeled_questions(data, qpath);
  CHECK(read_labeled_questions(qpath) == data);
  std::filesystem::remove(mpath);
  std::filesystem::remove(qpath);
}

TEST_CASE("softmax is stable") {
  const auto p = softmax({1000.0, 1000.0});
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(0.5));
}
