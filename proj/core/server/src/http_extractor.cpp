// SPDX-License-Identifier: Apache-2.0
#include "dqa/server/http_extractor.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "dqa/error.hpp"
#include "dqa/text.hpp"

namespace dqa::server {

HttpExtractor::HttpExtractor(std::string url, int timeout_seconds)
    : timeout_seconds_(timeout_seconds) {
  const auto scheme = url.find("://");
  const auto slash = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  origin_ = url.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : url.substr(slash);
}

std::optional<assistant::ExtractedSpan> HttpExtractor::extract(
    std::string_view question, const corpus::Document& /*doc*/,
    const corpus::Passage& passage) const {
  httplib::Client client(origin_);
  client.set_connection_timeout(timeout_seconds_);
  client.set_read_timeout(timeout_seconds_);
  const nlohmann::json req = {{"question", question}, {"context", passage.text}};
  auto res = client.Post(path_, req.dump(), "application/json");
  if (!res || res->status != 200) {
    throw Error(ErrorCode::IoError, "QA backend request failed");
  }
  nlohmann::json body;
  try {
    body = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("QA backend reply: ") + e.what());
  }
  const std::string answer = body.value("text", "");
  if (answer.empty()) return std::nullopt;

  std::size_t local = std::string::npos;
  if (body.contains("answer_start") && body["answer_start"].is_number_unsigned()) {
    local = text::byte_offset(passage.text, body["answer_start"].get<std::size_t>());
  } else {
    local = passage.text.find(answer);
  }
  if (local == std::string::npos) {
    throw Error(ErrorCode::OffsetMismatch, "QA backend answer not found in the passage");
  }
  // The caller re-checks the text against the body at these offsets.
  const std::size_t start = passage.char_start + local;
  return assistant::ExtractedSpan{answer, start, start + answer.size(), 0.0};
}

}  // namespace dqa::server
