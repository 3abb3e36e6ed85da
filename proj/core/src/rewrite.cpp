// SPDX-License-Identifier: Apache-2.0
#include "dqa/rewrite.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dqa/error.hpp"
#include "dqa/text.hpp"

namespace dqa::rewrite {
namespace {

std::vector<RewriteRule> make_rules(const std::vector<std::string>& patterns) {
  std::vector<RewriteRule> rules;
  rules.reserve(patterns.size());
  int order = 1;
  for (const auto& p : patterns) rules.emplace_back(p, order++);
  return rules;
}

}  // namespace

RewriteRule::RewriteRule(std::string pattern_text, int rule_order)
    : pattern(std::move(pattern_text)), order(rule_order) {
  try {
    compiled = std::regex(pattern, std::regex::ECMAScript);
  } catch (const std::regex_error& e) {
    throw Error(ErrorCode::InvalidArgument,
                "rewrite pattern " + std::to_string(order) + " (" + pattern +
                    ") does not compile: " + e.what());
  }
}

std::vector<RewriteRule> default_rules() {
  return make_rules({
      R"(^does( the)? document (\S)+ (you)? )",
      R"(^does it (\S)+ )",
      R"(^what does( the)? document (\S)+ (you)? )",
      R"(according to( the)? document(\s,\s|,\s|\s))",
      R"(in( the)? document )",
      R"(^assistant, )",
  });
}

std::vector<RewriteRule> corrected_rules() {
  return make_rules({
      R"(^does( the)? document (\S)+( you)? )",
      R"(^does it (\S)+ )",
      R"(^what does( the)? document (\S)+( you)? )",
      R"(according to( the)? document(\s,\s|,\s|\s))",
      R"(in( the)? document )",
      R"(^assistant, )",
  });
}

std::vector<RewriteRule> rules_from_json(std::string_view json_text) {
  try {
    const auto j = nlohmann::json::parse(json_text);
    if (!j.is_array()) {
      throw Error(ErrorCode::ParseError, "rule file must be a JSON array of patterns");
    }
    return make_rules(j.get<std::vector<std::string>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad rule file: ") + e.what());
  }
}

std::vector<RewriteRule> load_rules(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return rules_from_json(buf.str());
}

RewriteResult rewrite(std::string_view question,
                      const std::vector<RewriteRule>& rules) {
  RewriteResult result;
  result.original = std::string(question);
  std::string current = text::ascii_lower(question);
  for (const auto& rule : rules) {
    if (std::regex_search(current, rule.compiled)) {
      result.applied.push_back(rule.order);
      current = std::regex_replace(current, rule.compiled, "");
    }
  }
  if (result.applied.empty()) {
    result.rewritten = result.original;
  } else {
    result.rewritten = std::string(text::trim_left(current));
  }
  return result;
}

}  // namespace dqa::rewrite
