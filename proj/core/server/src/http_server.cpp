// SPDX-License-Identifier: Apache-2.0
#include "dqa/server/http_server.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "dqa/error.hpp"
#include "dqa/server/http_extractor.hpp"
#include "dqa/synthetic.hpp"

namespace dqa::server {
namespace {

using nlohmann::json;

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound: return 404;
    case ErrorCode::ParseError:
    case ErrorCode::InvalidArgument: return 400;
    case ErrorCode::EmptyDocument:
    case ErrorCode::SpanOutOfRange:
    case ErrorCode::OffsetMismatch: return 422;
    default: return 500;
  }
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, std::string_view msg) {
  send_json(res, status, {{"code", code}, {"message", msg}});
}

json parse_body(const httplib::Request& req) {
  try {
    auto j = json::parse(req.body);
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "request body must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid JSON body: ") + e.what());
  }
}

std::string required_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw Error(ErrorCode::InvalidArgument, std::string("missing string field '") + key + "'");
  }
  return it->get<std::string>();
}

// Wraps a handler so library errors become JSON error bodies.
template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send_error(res, status_for(e.code()), to_string(e.code()), e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "InternalError", e.what());
    }
  };
}

}  // namespace

struct HttpServer::Impl {
  std::shared_ptr<assistant::Assistant> engine;
  ServerConfig config;
  httplib::Server server;
};

HttpServer::HttpServer(std::shared_ptr<assistant::Assistant> engine, ServerConfig config)
    : impl_(std::make_unique<Impl>()) {
  impl_->engine = std::move(engine);
  impl_->config = std::move(config);
  auto& srv = impl_->server;
  auto* engine_ptr = impl_->engine.get();

  srv.Post("/documents", guarded([engine_ptr](const httplib::Request& req, httplib::Response& res) {
    const json body = parse_body(req);
    const std::string title = body.contains("title") ? required_string(body, "title") : "";
    const std::string text = required_string(body, "text");
    const std::string format = body.value("format", "text");
    const auto fmt = format == "markdown" ? corpus::SourceFormat::Markdown
                                          : corpus::SourceFormat::PlainText;
    send_json(res, 201, {{"doc_id", engine_ptr->add_document(title, text, fmt)}});
  }));

  srv.Get(R"(/documents/([^/]+))",
          guarded([engine_ptr](const httplib::Request& req, httplib::Response& res) {
            const std::string id = req.matches[1];
            auto doc = engine_ptr->document(id);
            if (!doc) throw Error(ErrorCode::NotFound, "unknown document " + id);
            json j = doc->doc;
            j["passages"] = doc->passages.size();
            send_json(res, 200, j);
          }));

  srv.Post("/sessions", guarded([engine_ptr](const httplib::Request& req, httplib::Response& res) {
    const json body = parse_body(req);
    auto s = engine_ptr->create_session(required_string(body, "doc_id"));
    send_json(res, 201, {{"session_id", s->id()}, {"doc_id", s->doc_id()}});
  }));

  srv.Post(R"(/sessions/([^/]+)/ask)",
           guarded([engine_ptr](const httplib::Request& req, httplib::Response& res) {
             const json body = parse_body(req);
             const auto question = required_string(body, "question");
             send_json(res, 200, engine_ptr->ask(req.matches[1], question));
           }));

  srv.Get(R"(/sessions/([^/]+)/history)",
          guarded([engine_ptr](const httplib::Request& req, httplib::Response& res) {
            const std::string id = req.matches[1];
            auto s = engine_ptr->session(id);
            if (!s) throw Error(ErrorCode::NotFound, "unknown session " + id);
            send_json(res, 200,
                      {{"session_id", s->id()}, {"doc_id", s->doc_id()}, {"turns", s->history()}});
          }));

  srv.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      send_error(res, res.status, res.status == 404 ? "NotFound" : "HttpError",
                 "no such endpoint");
    }
  });

  if (!impl_->config.static_dir.empty()) {
    srv.set_mount_point("/", impl_->config.static_dir);
  }
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  auto& c = impl_->config;
  if (c.port == 0) return impl_->server.bind_to_any_port(c.host);
  return impl_->server.bind_to_port(c.host, c.port) ? c.port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

std::shared_ptr<assistant::Assistant> make_assistant(const ServerConfig& config) {
  auto model = config.model_path.empty() ? synthetic::default_model()
                                         : taxonomy::load_model(config.model_path);
  std::vector<rewrite::RewriteRule> rules;
  if (config.rules == "none") {
  } else if (config.rules == "default") {
    rules = rewrite::default_rules();
  } else if (config.rules == "corrected") {
    rules = rewrite::corrected_rules();
  } else {
    rules = rewrite::load_rules(config.rules);
  }
  assistant::AnswerConfig answer_config;
  answer_config.threshold = config.threshold;
  answer_config.bm25 = config.bm25;
  std::shared_ptr<const assistant::AnswerExtractor> extractor;
  if (!config.qa_backend_url.empty()) {
    extractor = std::make_shared<HttpExtractor>(config.qa_backend_url);
  }
  return std::make_shared<assistant::Assistant>(std::move(model), std::move(rules),
                                                answer_config, std::move(extractor));
}

}  // namespace dqa::server
