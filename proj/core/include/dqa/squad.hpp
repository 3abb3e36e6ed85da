// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dqa/aggregate.hpp"

namespace dqa::squad {

/// `answer_start` counts Unicode code points, as in the reference files.
struct Answer {
  std::string text;
  std::size_t answer_start = 0;

  bool operator==(const Answer&) const = default;
};

struct QA {
  std::string id;
  std::string question;
  std::vector<Answer> answers;
  bool is_impossible = false;
  nlohmann::json extra = nlohmann::json::object();  ///< unknown keys, kept as-is

  bool operator==(const QA&) const = default;
};

struct Paragraph {
  std::string context;
  std::vector<QA> qas;
  nlohmann::json extra = nlohmann::json::object();

  bool operator==(const Paragraph&) const = default;
};

struct Article {
  std::string title;
  std::vector<Paragraph> paragraphs;
  nlohmann::json extra = nlohmann::json::object();

  bool operator==(const Article&) const = default;
};

struct SquadFile {
  std::string version = "v2.0";
  std::vector<Article> data;

  bool operator==(const SquadFile&) const = default;
};

/// Namespaced key under which question metadata rides in each QA entry.
inline constexpr const char* kExtensionKey = "dqa";

/// Throws Error(ParseError) for malformed JSON or duplicate ids and
/// Error(OffsetMismatch) (message names the question id) when an answer does
/// not occur at its answer_start.
SquadFile parse_squad(const nlohmann::json& j);
SquadFile read_squad(const std::string& path);

nlohmann::json to_json(const SquadFile& file);
void write_squad_file(const SquadFile& file, const std::string& path);

/// Groups examples into articles (one per document, in order of first
/// appearance) and paragraphs (one per distinct context). Every example
/// becomes its own QA entry. `titles` maps document ids to article titles.
SquadFile build_squad(const std::vector<aggregate::TrainingExample>& examples,
                      const std::map<std::string, std::string>& titles = {});

/// build_squad + write; throws Error(IoError) on write failure.
SquadFile write_squad(const std::vector<aggregate::TrainingExample>& examples,
                      const std::string& path,
                      const std::map<std::string, std::string>& titles = {});

/// Checks every answer offset; throws like parse_squad.
void verify_offsets(const SquadFile& file);

/// Article-level split. Articles are identified by the document id stored in
/// their extension (falling back to the title).
std::pair<SquadFile, SquadFile> split_articles(const SquadFile& file,
                                               double fraction,
                                               std::uint64_t seed);

std::string article_key(const Article& a);

/// Gold answers per question id; an impossible question maps to {""}.
std::map<std::string, std::vector<std::string>> gold_answers(const SquadFile& file);

}  // namespace dqa::squad
