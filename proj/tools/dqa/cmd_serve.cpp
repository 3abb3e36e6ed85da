// SPDX-License-Identifier: Apache-2.0
#include <csignal>
#include <iostream>
#include <memory>
#include <optional>

#include "commands.hpp"
#include "dqa/server/http_server.hpp"

namespace dqa::cli {
namespace {

struct ServeOpts {
  std::string config_file;
  std::optional<std::string> host;
  std::optional<int> port;
  std::optional<double> threshold;
  std::optional<double> k1;
  std::optional<double> b;
  std::optional<std::string> model;
  std::optional<std::string> rules;
  std::optional<std::string> backend;
  std::optional<std::string> static_dir;
};

server::HttpServer* g_server = nullptr;

extern "C" void handle_signal(int) {
  if (g_server) g_server->stop();
}

int run_serve(const ServeOpts& o) {
  auto c = server::load_config(o.config_file);
  if (o.host) c.host = *o.host;
  if (o.port) c.port = *o.port;
  if (o.threshold) c.threshold = *o.threshold;
  if (o.k1) c.bm25.k1 = *o.k1;
  if (o.b) c.bm25.b = *o.b;
  if (o.model) c.model_path = *o.model;
  if (o.rules) c.rules = *o.rules;
  if (o.backend) c.qa_backend_url = *o.backend;
  if (o.static_dir) c.static_dir = *o.static_dir;

  server::HttpServer srv(server::make_assistant(c), c);
  const int port = srv.bind();
  if (port < 0) {
    std::cerr << "dqa: cannot bind " << c.host << ':' << c.port << '\n';
    return 1;
  }
  g_server = &srv;
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  std::cout << "listening on http://" << c.host << ':' << port << std::endl;
  const bool ok = srv.listen();
  g_server = nullptr;
  return ok ? 0 : 1;
}

}  // namespace

void add_serve_command(CLI::App& app, const Globals&, Action& action) {
  auto o = std::make_shared<ServeOpts>();
  auto* serve = app.add_subcommand("serve", "Run the HTTP JSON API");
  serve->add_option("--server-config", o->config_file, "JSON server config (env vars override it)")
      ->check(CLI::ExistingFile);
  serve->add_option("--host", o->host, "Bind address");
  serve->add_option("--port", o->port, "Port (0 picks a free one)");
  serve->add_option("--threshold", o->threshold, "Abstain below this BM25 score");
  serve->add_option("--bm25-k1", o->k1, "BM25 k1");
  serve->add_option("--bm25-b", o->b, "BM25 b");
  serve->add_option("-m,--model", o->model, "Taxonomy model JSON");
  serve->add_option("--rules", o->rules, "Rewrite rules: default, corrected, none, file");
  serve->add_option("--qa-backend", o->backend, "External answer-selection service URL");
  serve->add_option("--static-dir", o->static_dir, "Directory served at /");
  serve->callback([o, &action] { action = [o] { return run_serve(*o); }; });
}

}  // namespace dqa::cli
