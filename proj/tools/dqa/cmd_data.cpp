// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "commands.hpp"
#include "dqa/aggregate.hpp"
#include "dqa/error.hpp"
#include "dqa/evaluation.hpp"
#include "dqa/metrics.hpp"
#include "dqa/squad.hpp"
#include "dqa/synthetic.hpp"

namespace dqa::cli {
namespace {

struct AggregateOpts {
  std::string annotations;
  std::string docs;
  std::string output;
  std::string consolidated;
  std::size_t window = corpus::kDefaultWindow;
};

int run_aggregate(const AggregateOpts& o, const Globals& g) {
  const auto docs = corpus::read_documents(o.docs);
  const auto by_id = evaluation::index_documents(docs);
  const auto aggregated = aggregate::aggregate_records(aggregate::read_annotations(o.annotations));

  std::vector<aggregate::TrainingExample> examples;
  std::map<std::string, std::string> titles;
  for (const auto& d : docs) titles[d.id] = d.title;
  std::size_t impossible = 0;
  for (const auto& cq : aggregated.questions) {
    auto doc = by_id.find(cq.doc_id);
    if (doc == by_id.end()) {
      throw Error(ErrorCode::DocumentMismatch,
                  "question " + cq.question_id + " refers to unknown document " + cq.doc_id);
    }
    auto ex = aggregate::expand_examples(cq, doc->second, o.window);
    for (const auto& e : ex) impossible += e.is_impossible;
    examples.insert(examples.end(), ex.begin(), ex.end());
  }
  const auto file = squad::write_squad(examples, o.output, titles);
  if (!o.consolidated.empty()) {
    std::ofstream out(o.consolidated, std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + o.consolidated);
    for (const auto& cq : aggregated.questions) out << nlohmann::json(cq).dump() << '\n';
  }

  const nlohmann::json j = {{"questions", aggregated.questions.size()},
                            {"invalid_discarded", aggregated.invalid_discarded},
                            {"emptied", aggregated.emptied},
                            {"examples", examples.size()},
                            {"impossible_examples", impossible},
                            {"articles", file.data.size()}};
  if (g.output_format() == Format::Json) {
    print_json(std::cout, j);
  } else {
    Table t({"", "Number"});
    t.add({"Consolidated questions", std::to_string(aggregated.questions.size())});
    t.add({"Invalid questions (discarded)", std::to_string(aggregated.invalid_discarded)});
    t.add({"Emptied by consolidation", std::to_string(aggregated.emptied)});
    t.add({"Training examples", std::to_string(examples.size())});
    t.add({"Impossible examples", std::to_string(impossible)});
    t.print(std::cout);
  }
  return 0;
}

struct SplitOpts {
  std::string input;
  double fraction = 0.25;
  std::string train;
  std::string holdout;
};

std::size_t count_questions(const squad::SquadFile& f) {
  std::size_t n = 0;
  for (const auto& a : f.data) {
    for (const auto& p : a.paragraphs) n += p.qas.size();
  }
  return n;
}

int run_split(const SplitOpts& o, const Globals& g) {
  const auto file = squad::read_squad(o.input);
  const auto [train, holdout] = squad::split_articles(file, o.fraction, g.seed);
  squad::write_squad_file(train, o.train);
  squad::write_squad_file(holdout, o.holdout);
  if (g.output_format() == Format::Json) {
    print_json(std::cout, {{"train", {{"articles", train.data.size()},
                                      {"questions", count_questions(train)}}},
                           {"holdout", {{"articles", holdout.data.size()},
                                        {"questions", count_questions(holdout)}}}});
  } else {
    Table t({"Split", "Documents", "Questions"});
    t.add({"train", std::to_string(train.data.size()), std::to_string(count_questions(train))});
    t.add({"hold-out", std::to_string(holdout.data.size()),
           std::to_string(count_questions(holdout))});
    t.print(std::cout);
  }
  return 0;
}

int run_stats(const std::string& path, const Globals& g) {
  const auto s = aggregate::dataset_stats(aggregate::aggregate_records(aggregate::read_annotations(path)));
  if (g.output_format() == Format::Json) {
    print_json(std::cout, s);
    return 0;
  }
  Table types({"", "Number", "% (of total)"});
  types.add({"Annotated documents", std::to_string(s.annotated_documents), "--"});
  types.add({"Valid questions (= annotation tasks)", std::to_string(s.valid_questions),
             fixed(s.valid_questions ? 100.0 : 0.0)});
  types.add({"Invalid questions (discarded)", std::to_string(s.invalid_questions), "--"});
  types.add({"Open questions", std::to_string(s.open_questions), fixed(s.open_pct)});
  types.add({"Yes/no questions", std::to_string(s.yes_no_questions), fixed(s.yes_no_pct)});
  types.add({"No answer", std::to_string(s.no_answer), fixed(s.no_answer_pct)});
  types.add({"No evidence", std::to_string(s.no_evidence), fixed(s.no_evidence_pct)});
  types.print(std::cout);
  std::cout << '\n';

  Table spans({"", "Statistic"});
  spans.add({"Total spans", std::to_string(s.total_spans)});
  spans.add({"Average number of spans per question (all)", fixed(s.avg_spans_per_question, 3)});
  spans.add({"Average number of spans per question with answer",
             fixed(s.avg_spans_per_answered_question, 3)});
  spans.add({"Average span length per question (all)", fixed(s.avg_span_tokens_per_question)});
  spans.add({"Average span length per question with answer", fixed(s.avg_span_tokens_answered)});
  spans.print(std::cout);
  if (s.undefined_averages) std::cout << "(averages with an empty denominator are reported as 0)\n";
  return 0;
}

int run_agreement(const std::string& path, const Globals& g) {
  const auto a = metrics::agreement(aggregate::group_by_question(aggregate::read_annotations(path)));
  if (g.output_format() == Format::Json) {
    print_json(std::cout, a);
    return 0;
  }
  auto pm = [](const metrics::MeanStdev& m) { return "(±" + fixed(m.stdev) + " sd)"; };
  Table t({"", "Metric", ""});
  t.add({"Impossible full agreement (%)", fixed(a.impossible_full_agreement_pct), ""});
  t.add({"Impossible partial agreement (%)", fixed(a.impossible_partial_agreement_pct), ""});
  t.add({"Rouge-1 F-score avg (questions with span)", fixed(a.rouge_1.mean), pm(a.rouge_1)});
  t.add({"Rouge-2 F-score avg (questions with span)", fixed(a.rouge_2.mean), pm(a.rouge_2)});
  t.add({"Rouge-L F-score avg (questions with span)", fixed(a.rouge_l.mean), pm(a.rouge_l)});
  t.print(std::cout);
  return 0;
}

struct SynthOpts {
  std::string output_dir;
  synthetic::SyntheticSpec spec;
  std::string placement = "uniform";
  std::size_t templates = 80;
};

int run_synthetic(SynthOpts o, const Globals& g) {
  if (o.placement == "first") o.spec.placement = synthetic::Placement::FirstSentence;
  else if (o.placement == "uniform") o.spec.placement = synthetic::Placement::Uniform;
  else throw UsageError("--placement must be uniform or first");
  o.spec.seed = g.seed;
  const auto corpus = synthetic::generate_synthetic(o.spec);

  namespace fs = std::filesystem;
  fs::create_directories(o.output_dir);
  const fs::path dir(o.output_dir);
  corpus::write_documents(corpus.documents, (dir / "docs.jsonl").string());
  aggregate::write_annotations(corpus.annotations, (dir / "annotations.jsonl").string());
  taxonomy::write_labeled_questions(corpus.labeled, (dir / "questions.jsonl").string());
  taxonomy::write_labeled_questions(synthetic::template_questions({o.templates, g.seed}),
                                    (dir / "templates.jsonl").string());
  {
    std::ofstream out(dir / "planted.jsonl", std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write planted.jsonl");
    for (const auto& q : corpus.questions) {
      nlohmann::json j = {{"question_id", q.question_id}, {"doc_id", q.doc_id},
                          {"text", q.text},               {"label", q.label},
                          {"answerable", q.answerable},   {"is_yes_no", q.is_yes_no},
                          {"invalid", q.invalid}};
      if (q.answerable) {
        j["gold_sentence"] = q.gold_sentence;
        j["gold_span"] = {{"text", q.gold_span.text},
                          {"char_start", q.gold_span.char_start},
                          {"char_end", q.gold_span.char_end}};
      }
      out << j.dump() << '\n';
    }
  }
  std::size_t answerable = 0;
  for (const auto& q : corpus.questions) answerable += q.answerable;
  const nlohmann::json summary = {{"documents", corpus.documents.size()},
                                  {"questions", corpus.questions.size()},
                                  {"answerable", answerable},
                                  {"annotations", corpus.annotations.size()},
                                  {"output_dir", o.output_dir}};
  if (g.output_format() == Format::Json) {
    print_json(std::cout, summary);
  } else {
    Table t({"Documents", "Questions", "Answerable", "Annotation records"});
    t.add({std::to_string(corpus.documents.size()), std::to_string(corpus.questions.size()),
           std::to_string(answerable), std::to_string(corpus.annotations.size())});
    t.print(std::cout);
  }
  return 0;
}

}  // namespace

void add_data_commands(CLI::App& app, const Globals& g, Action& action) {
  auto ao = std::make_shared<AggregateOpts>();
  auto* agg = app.add_subcommand(
      "aggregate", "Consolidate worker annotations into SQuAD2.0-format training data");
  agg->add_option("-a,--annotations", ao->annotations, "Raw annotation JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  agg->add_option("--docs", ao->docs, "Documents JSONL")->required()->check(CLI::ExistingFile);
  agg->add_option("-o,--output", ao->output, "SQuAD2.0 JSON to write")->required();
  agg->add_option("--consolidated", ao->consolidated, "Also write consolidated questions JSONL");
  agg->add_option("--window", ao->window, "Sentences per passage")->capture_default_str()
      ->check(CLI::PositiveNumber);
  agg->callback([ao, &g, &action] { action = [ao, &g] { return run_aggregate(*ao, g); }; });

  auto so = std::make_shared<SplitOpts>();
  auto* split = app.add_subcommand("split", "Document-level train/hold-out split of a SQuAD file");
  split->add_option("-i,--input", so->input, "SQuAD2.0 JSON")->required()->check(CLI::ExistingFile);
  split->add_option("--fraction", so->fraction, "Hold-out fraction of documents")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  split->add_option("--train", so->train, "Training file to write")->required();
  split->add_option("--holdout", so->holdout, "Hold-out file to write")->required();
  split->callback([so, &g, &action] { action = [so, &g] { return run_split(*so, g); }; });

  auto stats_path = std::make_shared<std::string>();
  auto* stats = app.add_subcommand("stats", "Question/answer type and span statistics");
  stats->add_option("-a,--annotations", *stats_path, "Raw annotation JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  stats->callback([stats_path, &g, &action] {
    action = [stats_path, &g] { return run_stats(*stats_path, g); };
  });

  auto agr_path = std::make_shared<std::string>();
  auto* agr = app.add_subcommand("agreement", "Worker agreement statistics");
  agr->add_option("-a,--annotations", *agr_path, "Raw annotation JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  agr->callback([agr_path, &g, &action] {
    action = [agr_path, &g] { return run_agreement(*agr_path, g); };
  });

  auto yo = std::make_shared<SynthOpts>();
  auto* syn = app.add_subcommand("generate-synthetic",
                                 "Write a synthetic corpus with planted questions and annotations");
  syn->add_option("-o,--output-dir", yo->output_dir, "Directory to write into")->required();
  syn->add_option("--docs", yo->spec.n_docs, "Documents")->capture_default_str();
  syn->add_option("--sentences", yo->spec.sentences_per_doc, "Sentences per document")
      ->capture_default_str();
  syn->add_option("--vocab", yo->spec.vocab_size, "Pseudo-word vocabulary size")
      ->capture_default_str();
  syn->add_option("--questions", yo->spec.questions_per_doc, "Questions per document")
      ->capture_default_str();
  syn->add_option("--unanswerable", yo->spec.unanswerable_fraction, "Unanswerable fraction")
      ->capture_default_str();
  syn->add_option("--yes-no", yo->spec.yes_no_fraction, "Yes/no fraction")->capture_default_str();
  syn->add_option("--workers", yo->spec.workers_per_question, "Workers per question")
      ->capture_default_str();
  syn->add_option("--placement", yo->placement, "Answer placement: uniform or first")
      ->capture_default_str();
  syn->add_option("--templates", yo->templates, "Per-class size of templates.jsonl")
      ->capture_default_str();
  syn->callback([yo, &g, &action] { action = [yo, &g] { return run_synthetic(*yo, g); }; });
}

}  // namespace dqa::cli
