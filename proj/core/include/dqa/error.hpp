// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dqa {

enum class ErrorCode {
  EmptyDocument,
  SpanOutOfRange,
  DocumentMismatch,
  EmptyCorpus,
  DegenerateData,
  EmptyAfterFiltering,
  NoAnswerChunks,
  TooFewPairs,
  ParseError,
  OffsetMismatch,
  IoError,
  InvalidArgument,
  NotFound,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception. Every failure the modules report carries one of
/// the codes above so callers (CLI, HTTP layer) can map it to exit codes or
/// status codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dqa
