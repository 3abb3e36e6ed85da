// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include <CLI11.hpp>

#include "dqa/rewrite.hpp"
#include "output.hpp"

namespace dqa::cli {

/// Work selected during parsing; runs after parsing succeeds and returns the
/// exit code.
using Action = std::function<int()>;

/// "default", "corrected", "none" or a path to a JSON pattern array.
std::vector<rewrite::RewriteRule> rules_by_name(const std::string& name);

void add_corpus_commands(CLI::App& app, const Globals& g, Action& action);
void add_taxonomy_commands(CLI::App& app, const Globals& g, Action& action);
void add_data_commands(CLI::App& app, const Globals& g, Action& action);
void add_eval_commands(CLI::App& app, const Globals& g, Action& action);
void add_serve_command(CLI::App& app, const Globals& g, Action& action);

}  // namespace dqa::cli
