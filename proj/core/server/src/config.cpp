// SPDX-License-Identifier: Apache-2.0
#include "dqa/server/config.hpp"

#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "dqa/error.hpp"

namespace dqa::server {
namespace {

double parse_double(const char* name, const char* value) {
  char* end = nullptr;
  const double v = std::strtod(value, &end);
  if (end == value || *end != '\0') {
    throw Error(ErrorCode::InvalidArgument, std::string(name) + " is not a number: " + value);
  }
  return v;
}

}  // namespace

void apply_env(ServerConfig& c, const EnvLookup& env) {
  if (const char* v = env("DQA_HOST")) c.host = v;
  if (const char* v = env("DQA_PORT")) c.port = static_cast<int>(parse_double("DQA_PORT", v));
  if (const char* v = env("DQA_THRESHOLD")) c.threshold = parse_double("DQA_THRESHOLD", v);
  if (const char* v = env("DQA_BM25_K1")) c.bm25.k1 = parse_double("DQA_BM25_K1", v);
  if (const char* v = env("DQA_BM25_B")) c.bm25.b = parse_double("DQA_BM25_B", v);
  if (const char* v = env("DQA_MODEL_PATH")) c.model_path = v;
  if (const char* v = env("DQA_RULES")) c.rules = v;
  if (const char* v = env("DQA_QA_BACKEND_URL")) c.qa_backend_url = v;
  if (const char* v = env("DQA_STATIC_DIR")) c.static_dir = v;
}

ServerConfig load_config(const std::string& path) {
  ServerConfig c;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path);
    try {
      const auto j = nlohmann::json::parse(in);
      c.host = j.value("host", c.host);
      c.port = j.value("port", c.port);
      c.threshold = j.value("threshold", c.threshold);
      c.bm25.k1 = j.value("bm25_k1", c.bm25.k1);
      c.bm25.b = j.value("bm25_b", c.bm25.b);
      c.model_path = j.value("model_path", c.model_path);
      c.rules = j.value("rules", c.rules);
      c.qa_backend_url = j.value("qa_backend_url", c.qa_backend_url);
      c.static_dir = j.value("static_dir", c.static_dir);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
  }
  apply_env(c, [](const char* name) { return std::getenv(name); });
  return c;
}

}  // namespace dqa::server
