// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace dqa::cli {

/// Invalid flag combinations detected after parsing; exits with status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { Table, Json };

struct Globals {
  std::string format = "table";
  std::uint64_t seed = 42;

  Format output_format() const { return format == "json" ? Format::Json : Format::Table; }
};

/// Plain-text table; numeric-looking cells are right-aligned.
class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  void print(std::ostream& out) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string fixed(double v, int digits = 2);

void print_json(std::ostream& out, const nlohmann::json& j);

/// Reads every non-empty line of the stream.
std::vector<std::string> read_lines(std::istream& in);

}  // namespace dqa::cli
