// SPDX-License-Identifier: Apache-2.0
// dqa: one binary, one subcommand per pipeline stage.
#include <iostream>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "dqa/error.hpp"

int main(int argc, char** argv) {
  using namespace dqa::cli;
  CLI::App app{"Document-centered question answering toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML file with option defaults; flags win");

  Globals g;
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();

  Action action;
  add_corpus_commands(app, g, action);
  add_taxonomy_commands(app, g, action);
  add_data_commands(app, g, action);
  add_eval_commands(app, g, action);
  add_serve_command(app, g, action);
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return action ? action() : 0;
  } catch (const UsageError& e) {
    std::cerr << "dqa: " << e.what() << '\n';
    return 2;
  } catch (const dqa::Error& e) {
    std::cerr << "dqa: " << dqa::to_string(e.code()) << ": " << e.what() << '\n';
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "dqa: ParseError: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "dqa: " << e.what() << '\n';
  }
  return 1;
}
