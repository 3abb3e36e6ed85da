// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "dqa/assistant.hpp"

namespace dqa::server {

/// Delegates answer selection to an external service. The service receives
/// {"question", "context"} (SQuAD-style, context = passage text) and answers
/// {"text", "answer_start"?}, where answer_start counts code points in the
/// context. An empty text means no answer. The span is located in the
/// passage and verified by the pipeline like any other.
class HttpExtractor final : public assistant::AnswerExtractor {
 public:
  /// `url` like "http://host:port/path".
  explicit HttpExtractor(std::string url, int timeout_seconds = 10);

  std::optional<assistant::ExtractedSpan> extract(std::string_view question,
                                                  const corpus::Document& doc,
                                                  const corpus::Passage& passage) const override;

 private:
  std::string origin_;
  std::string path_;
  int timeout_seconds_;
};

}  // namespace dqa::server
