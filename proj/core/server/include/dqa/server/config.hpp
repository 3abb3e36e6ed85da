// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>

#include "dqa/retrieval.hpp"

namespace dqa::server {

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  double threshold = 0.5;
  retrieval::Bm25Params bm25;
  std::string model_path;       ///< empty: built-in template model
  std::string rules = "default";  ///< "default", "corrected" or a JSON file
  std::string qa_backend_url;   ///< empty: built-in overlap extractor
  std::string static_dir;       ///< optional directory served at /
};

using EnvLookup = std::function<const char*(const char*)>;

/// Applies DQA_HOST, DQA_PORT, DQA_THRESHOLD, DQA_BM25_K1, DQA_BM25_B,
/// DQA_MODEL_PATH, DQA_RULES, DQA_QA_BACKEND_URL and DQA_STATIC_DIR.
/// Throws Error(InvalidArgument) on unparsable numbers.
void apply_env(ServerConfig& config, const EnvLookup& env);

/// Reads a JSON config file (missing keys keep defaults), then applies the
/// process environment. An empty path skips the file.
ServerConfig load_config(const std::string& path);

}  // namespace dqa::server
