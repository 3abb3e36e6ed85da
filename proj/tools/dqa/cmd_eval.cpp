// SPDX-License-Identifier: Apache-2.0
#include <iostream>
#include <memory>

#include "commands.hpp"
#include "dqa/error.hpp"
#include "dqa/evaluation.hpp"

namespace dqa::cli {
namespace {

struct RankingOpts {
  std::string docs;
  std::string annotations;
  std::string baseline = "all";
  std::string rules = "default";
  std::size_t window = corpus::kDefaultWindow;
  double k1 = 1.2;
  double b = 0.75;
};

int run_ranking(const RankingOpts& o, const Globals& g) {
  std::vector<evaluation::Baseline> baselines;
  if (o.baseline == "all") {
    baselines = {evaluation::Baseline::Random, evaluation::Baseline::First,
                 evaluation::Baseline::Bm25};
  } else if (auto b = evaluation::parse_baseline(o.baseline)) {
    baselines = {*b};
  } else {
    throw UsageError("--baseline must be random, first, bm25 or all");
  }
  const auto docs = evaluation::index_documents(corpus::read_documents(o.docs));
  const auto aggregated = aggregate::aggregate_records(aggregate::read_annotations(o.annotations));
  const auto questions = evaluation::ranking_questions(aggregated, docs);
  evaluation::RankingOptions opts{g.seed, o.window, {o.k1, o.b}, rules_by_name(o.rules)};

  nlohmann::json j = nlohmann::json::array();
  Table t({"Model", "P@1 soft", "P@1 hard", "Rouge-1 F-score", "Rouge-2 F-score",
           "Rouge-L F-score"});
  for (auto b : baselines) {
    const auto r = evaluation::evaluate_ranking(questions, docs, b, opts);
    nlohmann::json row = r.eval;
    row["model"] = evaluation::to_string(b);
    j.push_back(row);
    t.add({std::string(evaluation::to_string(b)), fixed(r.eval.p_at_1_soft),
           fixed(r.eval.p_at_1_hard), fixed(r.eval.rouge_1.f1), fixed(r.eval.rouge_2.f1),
           fixed(r.eval.rouge_l.f1)});
  }
  if (g.output_format() == Format::Json) print_json(std::cout, j);
  else t.print(std::cout);
  return 0;
}

struct ExtractionOpts {
  std::string gold;
  std::vector<std::string> systems;
  std::string save;
};

struct System {
  std::string name;
  std::string source;
  std::map<std::string, std::string> predictions;
};

// NAME=SOURCE, SOURCE being a predictions file or overlap:RULES.
System load_system(const std::string& spec, const squad::SquadFile& gold) {
  const auto eq = spec.find('=');
  System s;
  s.name = eq == std::string::npos ? spec : spec.substr(0, eq);
  s.source = eq == std::string::npos ? spec : spec.substr(eq + 1);
  if (s.source.starts_with("overlap")) {
    const std::string rules = s.source.size() > 8 && s.source[7] == ':' ? s.source.substr(8) : "none";
    s.predictions = evaluation::predict_overlap(gold, rules_by_name(rules));
  } else {
    s.predictions = evaluation::read_predictions(s.source);
  }
  return s;
}

int run_extraction(const ExtractionOpts& o, const Globals& g) {
  const auto gold = squad::read_squad(o.gold);
  std::vector<System> systems;
  for (const auto& spec : o.systems) systems.push_back(load_system(spec, gold));
  if (!o.save.empty()) {
    if (systems.size() != 1) throw UsageError("--save-predictions needs exactly one --system");
    evaluation::write_predictions(systems.front().predictions, o.save);
  }

  std::vector<evaluation::ExtractionReport> reports;
  for (const auto& s : systems) reports.push_back(evaluation::evaluate_predictions(gold, s.predictions));

  nlohmann::json j = {{"systems", nlohmann::json::array()}, {"comparisons", nlohmann::json::array()}};
  Table t({"Baseline", "Source", "F1", "EM"});
  for (std::size_t i = 0; i < systems.size(); ++i) {
    j["systems"].push_back({{"name", systems[i].name},
                            {"source", systems[i].source},
                            {"f1", reports[i].eval.f1},
                            {"em", reports[i].eval.em},
                            {"questions", reports[i].eval.questions}});
    t.add({systems[i].name, systems[i].source, fixed(reports[i].eval.f1),
           fixed(reports[i].eval.em)});
  }

  // Paired per-question F1 of the first system against each other one.
  Table w({"Comparison", "Pairs", "W", "z", "p"});
  for (std::size_t i = 1; i < systems.size(); ++i) {
    const std::string label = systems[0].name + " vs " + systems[i].name;
    try {
      const auto r = metrics::wilcoxon_signed_rank(reports[0].eval.per_question_f1,
                                                   reports[i].eval.per_question_f1);
      j["comparisons"].push_back({{"a", systems[0].name}, {"b", systems[i].name}, {"wilcoxon", r}});
      w.add({label, std::to_string(r.n), fixed(r.statistic, 1), fixed(r.z, 3),
             fixed(r.p_value, 6)});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TooFewPairs) throw;
      j["comparisons"].push_back(
          {{"a", systems[0].name}, {"b", systems[i].name}, {"error", e.what()}});
      w.add({label, "<6", "n/a", "n/a", "n/a"});
    }
  }
  if (g.output_format() == Format::Json) {
    print_json(std::cout, j);
  } else {
    t.print(std::cout);
    if (systems.size() > 1) {
      std::cout << "\nWilcoxon signed-rank on per-question F1 (two-sided, normal approximation)\n";
      w.print(std::cout);
    }
  }
  return 0;
}

}  // namespace

void add_eval_commands(CLI::App& app, const Globals& g, Action& action) {
  auto ro = std::make_shared<RankingOpts>();
  auto* rank = app.add_subcommand("evaluate-ranking", "Passage-ranking baselines (P@1, ROUGE)");
  rank->add_option("--docs", ro->docs, "Documents JSONL")->required()->check(CLI::ExistingFile);
  rank->add_option("-a,--annotations", ro->annotations, "Raw annotation JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  rank->add_option("--baseline", ro->baseline, "random, first, bm25 or all")
      ->capture_default_str();
  rank->add_option("--rules", ro->rules, "Query rewriting for BM25: default, corrected, none, file")
      ->capture_default_str();
  rank->add_option("--window", ro->window, "Sentences per passage")->capture_default_str()
      ->check(CLI::PositiveNumber);
  rank->add_option("--bm25-k1", ro->k1, "BM25 k1")->capture_default_str();
  rank->add_option("--bm25-b", ro->b, "BM25 b")->capture_default_str();
  rank->callback([ro, &g, &action] { action = [ro, &g] { return run_ranking(*ro, g); }; });

  auto eo = std::make_shared<ExtractionOpts>();
  auto* ext = app.add_subcommand(
      "evaluate-extraction", "SQuAD-style F1/EM of answer predictions, with Wilcoxon comparisons");
  ext->add_option("-g,--gold", eo->gold, "SQuAD2.0 JSON with gold answers")
      ->required()
      ->check(CLI::ExistingFile);
  ext->add_option("-s,--system", eo->systems,
                  "NAME=SOURCE where SOURCE is a predictions JSON {id: text} or "
                  "overlap[:RULES] (repeatable; the first is compared against the others)")
      ->required();
  ext->add_option("--save-predictions", eo->save, "Write the single system's predictions");
  ext->callback([eo, &g, &action] { action = [eo, &g] { return run_extraction(*eo, g); }; });
}

}  // namespace dqa::cli
