// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "commands.hpp"
#include "dqa/corpus.hpp"
#include "dqa/error.hpp"
#include "dqa/retrieval.hpp"
#include "dqa/text.hpp"

namespace dqa::cli {
namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct IngestOpts {
  std::vector<std::string> inputs;
  std::string output;
  std::string title;
  std::string category;
};

int run_ingest(const IngestOpts& o, const Globals& g) {
  if (!o.title.empty() && o.inputs.size() != 1) {
    throw UsageError("--title needs exactly one --input");
  }
  std::optional<corpus::Category> category;
  if (!o.category.empty()) {
    category = corpus::parse_category(o.category);
    if (!category) throw UsageError("unknown category '" + o.category + "'");
  }
  std::vector<corpus::Document> docs;
  for (const auto& path : o.inputs) {
    const std::string title =
        o.title.empty() ? std::filesystem::path(path).stem().string() : o.title;
    auto doc = corpus::ingest(slurp(path), title, corpus::format_from_path(path));
    doc.category = category;
    docs.push_back(std::move(doc));
  }
  corpus::write_documents(docs, o.output);

  if (g.output_format() == Format::Json) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& d : docs) {
      j.push_back({{"doc_id", d.id},
                   {"title", d.title},
                   {"sentences", d.sentences.size()},
                   {"sections", d.sections.size()},
                   {"passages", corpus::build_passages(d).size()}});
    }
    print_json(std::cout, j);
  } else {
    Table t({"Document", "Title", "Sentences", "Sections", "Passages"});
    for (const auto& d : docs) {
      t.add({d.id, d.title, std::to_string(d.sentences.size()),
             std::to_string(d.sections.size()),
             std::to_string(corpus::build_passages(d).size())});
    }
    t.print(std::cout);
  }
  return 0;
}

struct IndexOpts {
  std::string docs;
  std::string output;
  std::string load;
  std::vector<std::string> queries;
  std::size_t k = 5;
  std::size_t window = corpus::kDefaultWindow;
  std::size_t stride = 1;
  double k1 = 1.2;
  double b = 0.75;
};

int run_index(const IndexOpts& o, const Globals& g) {
  retrieval::PassageIndex index = [&] {
    if (!o.load.empty()) {
      if (!o.docs.empty()) throw UsageError("--load and --docs are exclusive");
      return retrieval::read_index(o.load);
    }
    if (o.docs.empty()) throw UsageError("either --docs or --load is required");
    std::vector<corpus::Passage> passages;
    for (const auto& d : corpus::read_documents(o.docs)) {
      auto p = corpus::build_passages(d, o.window, o.stride);
      passages.insert(passages.end(), p.begin(), p.end());
    }
    return retrieval::PassageIndex::build(passages, {o.k1, o.b});
  }();
  if (!o.output.empty()) retrieval::write_index(index, o.output);

  if (o.queries.empty()) {
    if (g.output_format() == Format::Json) {
      print_json(std::cout, {{"passages", index.size()},
                             {"terms", index.postings().size()},
                             {"average_length", index.average_length()},
                             {"k1", index.params().k1},
                             {"b", index.params().b}});
    } else {
      Table t({"Passages", "Terms", "Avg length", "k1", "b"});
      t.add({std::to_string(index.size()), std::to_string(index.postings().size()),
             fixed(index.average_length()), fixed(index.params().k1),
             fixed(index.params().b)});
      t.print(std::cout);
    }
    return 0;
  }

  nlohmann::json all = nlohmann::json::array();
  Table t({"Query", "Rank", "Document", "Passage", "Score"});
  for (std::size_t qi = 0; qi < o.queries.size(); ++qi) {
    const auto tokens = text::tokenize(o.queries[qi]);
    const auto ranked = retrieval::bm25_rank(index, tokens, o.k, std::to_string(qi));
    nlohmann::json hits = nlohmann::json::array();
    for (std::size_t r = 0; r < ranked.entries.size(); ++r) {
      const auto& e = ranked.entries[r];
      const auto& ref = index.refs()[e.passage_id];
      hits.push_back({{"doc_id", ref.doc_id},
                      {"passage_index", ref.passage_index},
                      {"score", e.score}});
      t.add({o.queries[qi], std::to_string(r + 1), ref.doc_id,
             std::to_string(ref.passage_index), fixed(e.score, 4)});
    }
    all.push_back({{"query", o.queries[qi]}, {"hits", hits}});
  }
  if (g.output_format() == Format::Json) print_json(std::cout, all);
  else t.print(std::cout);
  return 0;
}

}  // namespace

void add_corpus_commands(CLI::App& app, const Globals& g, Action& action) {
  auto io = std::make_shared<IngestOpts>();
  auto* ingest = app.add_subcommand("ingest", "Normalize, segment and store documents (JSONL)");
  ingest->add_option("-i,--input", io->inputs, "Plain-text or markdown files")
      ->required()
      ->check(CLI::ExistingFile);
  ingest->add_option("-o,--output", io->output, "Documents JSONL to write")->required();
  ingest->add_option("--title", io->title, "Title (single input only; default: file stem)");
  ingest->add_option("--category", io->category, "Document category, e.g. Report or Policy");
  ingest->callback([io, &g, &action] { action = [io, &g] { return run_ingest(*io, g); }; });

  auto xo = std::make_shared<IndexOpts>();
  auto* index = app.add_subcommand("index", "Build a BM25 passage index or query one");
  index->add_option("--docs", xo->docs, "Documents JSONL")->check(CLI::ExistingFile);
  index->add_option("--load", xo->load, "Existing index file to query")->check(CLI::ExistingFile);
  index->add_option("-o,--output", xo->output, "Index file to write");
  index->add_option("-q,--query", xo->queries, "Query to rank (repeatable)");
  index->add_option("-k", xo->k, "Hits per query")->capture_default_str()->check(CLI::PositiveNumber);
  index->add_option("--window", xo->window, "Sentences per passage")->capture_default_str()
      ->check(CLI::PositiveNumber);
  index->add_option("--stride", xo->stride, "Passage stride")->capture_default_str()
      ->check(CLI::PositiveNumber);
  index->add_option("--bm25-k1", xo->k1, "BM25 k1")->capture_default_str();
  index->add_option("--bm25-b", xo->b, "BM25 b")->capture_default_str();
  index->callback([xo, &g, &action] { action = [xo, &g] { return run_index(*xo, g); }; });
}

}  // namespace dqa::cli
