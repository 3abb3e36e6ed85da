// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>

#include "dqa/assistant.hpp"
#include "dqa/server/config.hpp"

namespace dqa::server {

/// JSON API over an Assistant:
///   POST /documents {title, text, format?}   -> {doc_id}
///   GET  /documents/{id}                     -> document JSON
///   POST /sessions {doc_id}                  -> {session_id, doc_id}
///   POST /sessions/{id}/ask {question}       -> AnswerResponse
///   GET  /sessions/{id}/history              -> {session_id, doc_id, turns}
/// Errors are {code, message} with 400/404/422/500 statuses.
class HttpServer {
 public:
  HttpServer(std::shared_ptr<assistant::Assistant> engine, ServerConfig config);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds to config.host:config.port (port 0 picks a free one) and returns
  /// the bound port, or -1 on failure.
  int bind();
  /// Serves until stop(); call after bind().
  bool listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Builds the engine described by the config (model, rules, extractor).
std::shared_ptr<assistant::Assistant> make_assistant(const ServerConfig& config);

}  // namespace dqa::server
