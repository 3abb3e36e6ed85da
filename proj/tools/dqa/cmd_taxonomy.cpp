// SPDX-License-Identifier: Apache-2.0
#include <iostream>
#include <memory>

#include "commands.hpp"
#include "dqa/error.hpp"
#include "dqa/rewrite.hpp"
#include "dqa/synthetic.hpp"
#include "dqa/taxonomy.hpp"

namespace dqa::cli {

std::vector<rewrite::RewriteRule> rules_by_name(const std::string& name) {
  if (name == "default") return rewrite::default_rules();
  if (name == "corrected") return rewrite::corrected_rules();
  if (name == "none") return {};
  return rewrite::load_rules(name);
}

namespace {

struct TrainOpts {
  std::string data;
  std::size_t templates = 80;
  double noise = 0.0;
  std::string noise_level = "L1";
  std::string output;
  std::size_t folds = 5;
  std::size_t epochs = 500;
  double lr = 0.1;
  double l2 = 1e-3;
};

int run_train(const TrainOpts& o, const Globals& g) {
  auto data = o.data.empty()
                  ? synthetic::template_questions({o.templates, g.seed})
                  : taxonomy::read_labeled_questions(o.data);
  if (o.noise > 0.0) {
    const auto level = taxonomy::parse_level(o.noise_level);
    if (!level) throw UsageError("unknown level '" + o.noise_level + "'");
    data = synthetic::with_label_noise(data, *level, o.noise, g.seed);
  }
  const taxonomy::Hyperparams hp{o.l2, o.epochs, o.lr, g.seed};

  nlohmann::json j = {{"questions", data.size()}, {"levels", nlohmann::json::array()}};
  Table t({"Level", "Questions", "Mean accuracy", "Variance"});
  for (auto level : {taxonomy::Level::L1, taxonomy::Level::L2, taxonomy::Level::L3}) {
    std::size_t labeled = 0;
    for (const auto& q : data) labeled += taxonomy::class_of(q.label, level).has_value();
    if (o.folds == 0) continue;
    try {
      const auto cv = taxonomy::cross_validate(data, level, o.folds, hp);
      j["levels"].push_back({{"level", taxonomy::to_string(level)},
                             {"questions", labeled},
                             {"mean_accuracy", cv.mean_accuracy},
                             {"variance", cv.variance},
                             {"fold_accuracies", cv.fold_accuracies}});
      t.add({std::string(taxonomy::to_string(level)), std::to_string(labeled),
             fixed(cv.mean_accuracy, 4), fixed(cv.variance, 6)});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateData && e.code() != ErrorCode::InvalidArgument) throw;
      j["levels"].push_back({{"level", taxonomy::to_string(level)},
                             {"questions", labeled},
                             {"error", e.what()}});
      t.add({std::string(taxonomy::to_string(level)), std::to_string(labeled), "n/a", "n/a"});
    }
  }
  if (!o.output.empty()) taxonomy::save_model(taxonomy::train_model(data, hp), o.output);

  if (g.output_format() == Format::Json) print_json(std::cout, j);
  else if (o.folds > 0) t.print(std::cout);
  return 0;
}

struct ClassifyOpts {
  std::string model;
  std::vector<std::string> questions;
};

int run_classify(const ClassifyOpts& o, const Globals& g) {
  const auto model = o.model.empty() ? synthetic::default_model() : taxonomy::load_model(o.model);
  auto questions = o.questions;
  if (questions.empty()) questions = read_lines(std::cin);

  nlohmann::json j = nlohmann::json::array();
  Table t({"Question", "L1", "L2", "L3", "P(L1)"});
  for (const auto& q : questions) {
    const auto r = model.classify(q);
    const auto& l = r.label;
    const double p1 = r.l1_probabilities.at(static_cast<std::size_t>(l.l1));
    j.push_back({{"question", q},
                 {"label", l},
                 {"l1_probabilities", r.l1_probabilities},
                 {"l2_probabilities", r.l2_probabilities},
                 {"l3_probabilities", r.l3_probabilities}});
    t.add({q, std::string(taxonomy::to_string(l.l1)),
           l.l2 ? std::string(taxonomy::to_string(*l.l2)) : "-",
           l.l3 ? std::string(taxonomy::to_string(*l.l3)) : "-", fixed(p1, 3)});
  }
  if (g.output_format() == Format::Json) print_json(std::cout, j);
  else t.print(std::cout);
  return 0;
}

int run_rewrite(const std::string& rules_name, const Globals& g) {
  const auto rules = rules_by_name(rules_name);
  std::string line;
  nlohmann::json j = nlohmann::json::array();
  while (std::getline(std::cin, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto r = rewrite::rewrite(line, rules);
    if (g.output_format() == Format::Json) {
      j.push_back({{"original", r.original}, {"rewritten", r.rewritten}, {"applied", r.applied}});
    } else {
      std::cout << r.rewritten << '\n';
    }
  }
  if (g.output_format() == Format::Json) print_json(std::cout, j);
  return 0;
}

}  // namespace

void add_taxonomy_commands(CLI::App& app, const Globals& g, Action& action) {
  auto to = std::make_shared<TrainOpts>();
  auto* train = app.add_subcommand(
      "classify-train", "Cross-validate and train the per-level question classifiers");
  train->add_option("--data", to->data, "Labeled questions JSONL {text,l1,l2,l3}")
      ->check(CLI::ExistingFile);
  train->add_option("--templates", to->templates,
                    "Per-class size of the built-in template set (used without --data)")
      ->capture_default_str();
  train->add_option("--noise", to->noise, "Fraction of labels to randomize")
      ->check(CLI::Range(0.0, 1.0));
  train->add_option("--noise-level", to->noise_level, "Level whose labels get noise")
      ->capture_default_str();
  train->add_option("-o,--output", to->output, "Model JSON to write");
  train->add_option("--folds", to->folds, "Cross-validation folds (0 skips)")->capture_default_str();
  train->add_option("--epochs", to->epochs, "Gradient-descent epochs")->capture_default_str();
  train->add_option("--lr", to->lr, "Learning rate")->capture_default_str();
  train->add_option("--l2", to->l2, "L2 penalty")->capture_default_str();
  train->callback([to, &g, &action] { action = [to, &g] { return run_train(*to, g); }; });

  auto co = std::make_shared<ClassifyOpts>();
  auto* classify = app.add_subcommand("classify", "Classify questions (arguments or stdin lines)");
  classify->add_option("-m,--model", co->model, "Model JSON (default: built-in template model)")
      ->check(CLI::ExistingFile);
  classify->add_option("-q,--question", co->questions, "Question (repeatable)");
  classify->callback([co, &g, &action] { action = [co, &g] { return run_classify(*co, g); }; });

  auto rules = std::make_shared<std::string>("default");
  auto* rw = app.add_subcommand("rewrite", "Strip document-centered phrasing from stdin lines");
  rw->add_option("--rules", *rules, "default, corrected, none, or a JSON array file")
      ->capture_default_str();
  rw->callback([rules, &g, &action] { action = [rules, &g] { return run_rewrite(*rules, g); }; });
}

}  // namespace dqa::cli
