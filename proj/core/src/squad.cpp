// SPDX-License-Identifier: Apache-2.0
#include "dqa/squad.hpp"

#include <fstream>
#include <set>

#include "dqa/error.hpp"
#include "dqa/text.hpp"

namespace dqa::squad {
namespace {

nlohmann::json leftovers(const nlohmann::json& j,
                         std::initializer_list<const char*> known) {
  nlohmann::json extra = nlohmann::json::object();
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool is_known = false;
    for (const char* k : known) is_known = is_known || it.key() == k;
    if (!is_known) extra[it.key()] = it.value();
  }
  return extra;
}

void merge(nlohmann::json& into, const nlohmann::json& extra) {
  for (auto it = extra.begin(); it != extra.end(); ++it) into[it.key()] = it.value();
}

bool answer_matches(const std::string& context, const Answer& a) {
  const std::size_t begin = text::byte_offset(context, a.answer_start);
  if (begin == std::string::npos || begin > context.size()) return false;
  return context.compare(begin, a.text.size(), a.text) == 0 &&
         begin + a.text.size() <= context.size();
}

}  // namespace

void verify_offsets(const SquadFile& file) {
  std::set<std::string> ids;
  for (const auto& article : file.data) {
    for (const auto& p : article.paragraphs) {
      for (const auto& qa : p.qas) {
        if (!ids.insert(qa.id).second) {
          throw Error(ErrorCode::ParseError, "duplicate question id " + qa.id);
        }
        for (const auto& a : qa.answers) {
          if (!answer_matches(p.context, a)) {
            throw Error(ErrorCode::OffsetMismatch,
                        "answer of question " + qa.id + " not found at offset " +
                            std::to_string(a.answer_start));
          }
        }
      }
    }
  }
}

SquadFile parse_squad(const nlohmann::json& j) {
  SquadFile file;
  try {
    file.version = j.value("version", "");
    for (const auto& ja : j.at("data")) {
      Article article;
      article.title = ja.value("title", "");
      article.extra = leftovers(ja, {"title", "paragraphs"});
      for (const auto& jp : ja.at("paragraphs")) {
        Paragraph p;
        p.context = jp.at("context").get<std::string>();
        p.extra = leftovers(jp, {"context", "qas"});
        for (const auto& jq : jp.at("qas")) {
          QA qa;
          qa.id = jq.at("id").get<std::string>();
          qa.question = jq.at("question").get<std::string>();
          qa.is_impossible = jq.value("is_impossible", false);
          qa.extra = leftovers(jq, {"id", "question", "answers", "is_impossible"});
          for (const auto& jans : jq.at("answers")) {
            qa.answers.push_back({jans.at("text").get<std::string>(),
                                  jans.at("answer_start").get<std::size_t>()});
          }
          p.qas.push_back(std::move(qa));
        }
        article.paragraphs.push_back(std::move(p));
      }
      file.data.push_back(std::move(article));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed SQuAD file: ") + e.what());
  }
  verify_offsets(file);
  return file;
}

SquadFile read_squad(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
  return parse_squad(j);
}

nlohmann::json to_json(const SquadFile& file) {
  nlohmann::json root = {{"version", file.version}, {"data", nlohmann::json::array()}};
  for (const auto& article : file.data) {
    nlohmann::json ja = {{"title", article.title}, {"paragraphs", nlohmann::json::array()}};
    merge(ja, article.extra);
    for (const auto& p : article.paragraphs) {
      nlohmann::json jp = {{"context", p.context}, {"qas", nlohmann::json::array()}};
      merge(jp, p.extra);
      for (const auto& qa : p.qas) {
        nlohmann::json jq = {{"id", qa.id},
                             {"question", qa.question},
                             {"is_impossible", qa.is_impossible},
                             {"answers", nlohmann::json::array()}};
        for (const auto& a : qa.answers) {
          jq["answers"].push_back({{"text", a.text}, {"answer_start", a.answer_start}});
        }
        merge(jq, qa.extra);
        jp["qas"].push_back(std::move(jq));
      }
      ja["paragraphs"].push_back(std::move(jp));
    }
    root["data"].push_back(std::move(ja));
  }
  return root;
}

void write_squad_file(const SquadFile& file, const std::string& path) {
  verify_offsets(file);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  out << to_json(file).dump() << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

SquadFile build_squad(const std::vector<aggregate::TrainingExample>& examples,
                      const std::map<std::string, std::string>& titles) {
  SquadFile file;
  std::map<std::string, std::size_t> article_of;
  for (const auto& ex : examples) {
    if (!ex.is_impossible &&
        ex.context.compare(ex.answer_start, ex.answer_text.size(), ex.answer_text) != 0) {
      throw Error(ErrorCode::OffsetMismatch,
                  "example " + ex.id + " answer not found in its context");
    }
    auto [it, fresh] = article_of.emplace(ex.doc_id, file.data.size());
    if (fresh) {
      Article a;
      auto t = titles.find(ex.doc_id);
      a.title = t != titles.end() ? t->second : ex.doc_id;
      a.extra[kExtensionKey] = {{"doc_id", ex.doc_id}};
      file.data.push_back(std::move(a));
    }
    Article& article = file.data[it->second];
    auto para = std::find_if(article.paragraphs.begin(), article.paragraphs.end(),
                             [&](const Paragraph& p) { return p.context == ex.context; });
    if (para == article.paragraphs.end()) {
      Paragraph p;
      p.context = ex.context;
      p.extra[kExtensionKey] = {{"passage_index", ex.passage_index},
                                {"context_offset", ex.context_offset}};
      article.paragraphs.push_back(std::move(p));
      para = std::prev(article.paragraphs.end());
    }
    QA qa;
    qa.id = ex.id;
    qa.question = ex.question;
    qa.is_impossible = ex.is_impossible;
    if (!ex.is_impossible) {
      qa.answers.push_back(
          {ex.answer_text, text::codepoint_offset(ex.context, ex.answer_start)});
    }
    nlohmann::json meta = {{"question_id", ex.question_id},
                           {"worker_id", ex.worker_id},
                           {"is_yes_no", ex.is_yes_no}};
    meta["yes_no_answer"] =
        ex.yes_no_answer ? nlohmann::json(std::string(aggregate::to_string(*ex.yes_no_answer)))
                         : nlohmann::json(nullptr);
    qa.extra[kExtensionKey] = std::move(meta);
    para->qas.push_back(std::move(qa));
  }
  return file;
}

SquadFile write_squad(const std::vector<aggregate::TrainingExample>& examples,
                      const std::string& path,
                      const std::map<std::string, std::string>& titles) {
  SquadFile file = build_squad(examples, titles);
  write_squad_file(file, path);
  return file;
}

std::string article_key(const Article& a) {
  if (a.extra.contains(kExtensionKey) && a.extra[kExtensionKey].contains("doc_id")) {
    return a.extra[kExtensionKey]["doc_id"].get<std::string>();
  }
  return a.title;
}

std::pair<SquadFile, SquadFile> split_articles(const SquadFile& file,
                                               double fraction,
                                               std::uint64_t seed) {
  std::vector<std::string> keys;
  for (const auto& a : file.data) keys.push_back(article_key(a));
  const auto split = aggregate::holdout_split(keys, fraction, seed);
  const std::set<std::string> held(split.holdout.begin(), split.holdout.end());
  SquadFile train{file.version, {}};
  SquadFile holdout{file.version, {}};
  for (const auto& a : file.data) {
    (held.count(article_key(a)) ? holdout : train).data.push_back(a);
  }
  return {std::move(train), std::move(holdout)};
}

std::map<std::string, std::vector<std::string>> gold_answers(const SquadFile& file) {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& a : file.data) {
    for (const auto& p : a.paragraphs) {
      for (const auto& qa : p.qas) {
        auto& golds = out[qa.id];
        if (qa.is_impossible || qa.answers.empty()) {
          golds.push_back("");
        } else {
          for (const auto& ans : qa.answers) golds.push_back(ans.text);
        }
      }
    }
  }
  return out;
}

}  // namespace dqa::squad
