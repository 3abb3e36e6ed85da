// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dqa/text.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(DQA_CLI_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("dqa_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("usage errors exit 2, data errors exit 1") {
  CHECK(run("").code == 2);
  CHECK(run("no-such-command").code == 2);
  CHECK(run("stats").code == 2);
  CHECK(run("--format xml stats -a x").code == 2);
  const auto dir = scratch("errors");
  std::ofstream(dir / "bad.jsonl") << "{not json\n";
  CHECK(run("stats -a " + (dir / "bad.jsonl").string()).code == 1);
}

TEST_CASE("stats on an empty annotation file prints a zeroed table") {
  const auto dir = scratch("empty");
  std::ofstream(dir / "empty.jsonl").close();
  const auto r = run("stats -a " + (dir / "empty.jsonl").string());
  CHECK(r.code == 0);
  CHECK(r.out.find("0") != std::string::npos);
  const auto j = run("--format json stats -a " + (dir / "empty.jsonl").string());
  CHECK(j.code == 0);
  CHECK(j.out.find("\"valid_questions\": 0") != std::string::npos);
}

TEST_CASE("first baseline on a first-passage corpus scores 1.00") {
  const auto dir = scratch("first");
  REQUIRE(run("generate-synthetic -o " + dir.string() + " --docs 20 --placement first").code == 0);
  const auto r = run("evaluate-ranking --docs " + (dir / "docs.jsonl").string() + " -a " +
                     (dir / "annotations.jsonl").string() + " --baseline first");
  CHECK(r.code == 0);
  CHECK(r.out.find("First") != std::string::npos);
  CHECK(r.out.find("1.00") != std::string::npos);
}

TEST_CASE("aggregate and split are byte-for-byte reproducible") {
  const auto dir = scratch("determinism");
  REQUIRE(run("generate-synthetic -o " + dir.string() + " --docs 12").code == 0);
  const auto a = (dir / "annotations.jsonl").string();
  const auto d = (dir / "docs.jsonl").string();
  std::array<std::string, 2> hashes;
  for (int i = 0; i < 2; ++i) {
    const auto sq = (dir / ("squad" + std::to_string(i) + ".json")).string();
    const auto tr = (dir / ("train" + std::to_string(i) + ".json")).string();
    const auto ho = (dir / ("holdout" + std::to_string(i) + ".json")).string();
    REQUIRE(run("aggregate -a " + a + " --docs " + d + " -o " + sq).code == 0);
    REQUIRE(run("--seed 42 split -i " + sq + " --fraction 0.25 --train " + tr + " --holdout " + ho)
                .code == 0);
    hashes[static_cast<std::size_t>(i)] =
        dqa::text::fnv1a_hex(slurp(sq) + slurp(tr) + slurp(ho));
  }
  CHECK(hashes[0] == hashes[1]);
}

TEST_CASE("classify and rewrite") {
  auto r = run("--format json classify -q 'What is the date of the festival?'");
  CHECK(r.code == 0);
  CHECK(r.out.find("Factoid") != std::string::npos);
  r = run("--format json rewrite --rules default < /dev/null");
  CHECK(r.code == 0);
}

TEST_CASE("ingest and index") {
  const auto dir = scratch("ingest");
  std::ofstream(dir / "memo.txt") << "The budget was approved. Hiring resumes in May.";
  REQUIRE(run("ingest -i " + (dir / "memo.txt").string() + " -o " + (dir / "docs.jsonl").string())
              .code == 0);
  const auto r = run("--format json index --docs " + (dir / "docs.jsonl").string() +
                     " -q 'when does hiring resume'");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"passage_index\": 0") != std::string::npos);
}
