// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <regex>
#include <string>
#include <string_view>
#include <vector>

namespace dqa::rewrite {

/// One deletion pattern. `order` is the 1-based position in its rule list.
struct RewriteRule {
  std::string pattern;
  int order = 0;
  std::regex compiled;

  /// Throws Error(InvalidArgument) if the pattern does not compile.
  RewriteRule(std::string pattern, int order);
};

struct RewriteResult {
  std::string original;
  std::string rewritten;
  std::vector<int> applied;
};

/// The six document/conversational deletion patterns, verbatim. Patterns 1
/// and 3 end in `(\S)+ (you)? `, which needs two spaces when "you" is absent.
std::vector<RewriteRule> default_rules();

/// Same list with patterns 1 and 3 read as `(\S)+( you)? `.
std::vector<RewriteRule> corrected_rules();

/// Rules from a JSON array of pattern strings.
std::vector<RewriteRule> rules_from_json(std::string_view json_text);
std::vector<RewriteRule> load_rules(const std::string& path);

/// Lowercases (ASCII), deletes every match of each rule in order, then trims
/// leading whitespace.
RewriteResult rewrite(std::string_view question,
                      const std::vector<RewriteRule>& rules);

}  // namespace dqa::rewrite
