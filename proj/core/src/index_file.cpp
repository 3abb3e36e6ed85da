// SPDX-License-Identifier: Apache-2.0
//
// Layout (all integers little-endian):
//   "DQAIDX1\0"  magic
//   u32          format version (1)
//   f64 f64      k1, b
//   f64          average passage length
//   u32          passage count N
//   N x { u32 length, u32 passage_index, u32 len, bytes doc_id }
//   u32          term count T
//   T x { u32 len, bytes term, u32 postings P, P x { u32 id, u32 tf } }
#include <bit>
#include <cstring>
#include <fstream>

#include "dqa/error.hpp"
#include "dqa/retrieval.hpp"

namespace dqa::retrieval {
namespace {

constexpr char kMagic[8] = {'D', 'Q', 'A', 'I', 'D', 'X', '1', '\0'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  explicit Writer(std::ofstream& out) : out_(out) {}

  void u32(std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out_.write(reinterpret_cast<const char*>(b), 4);
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
    out_.write(reinterpret_cast<const char*>(b), 8);
  }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  std::ofstream& out_;
};

class Reader {
 public:
  explicit Reader(std::ifstream& in) : in_(in) {}

  void bytes(char* dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw Error(ErrorCode::ParseError, "index file truncated");
    }
  }
  std::uint32_t u32() {
    unsigned char b[4];
    bytes(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
  }
  double f64() {
    unsigned char b[8];
    bytes(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return std::bit_cast<double>(v);
  }
  std::string str() {
    const std::uint32_t n = u32();
    if (n > (1u << 26)) throw Error(ErrorCode::ParseError, "index string too long");
    std::string s(n, '\0');
    bytes(s.data(), n);
    return s;
  }

 private:
  std::ifstream& in_;
};

}  // namespace

void write_index(const PassageIndex& index, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  Writer w(out);
  out.write(kMagic, sizeof kMagic);
  w.u32(kVersion);
  w.f64(index.params().k1);
  w.f64(index.params().b);
  w.f64(index.average_length());
  w.u32(static_cast<std::uint32_t>(index.size()));
  for (std::size_t i = 0; i < index.size(); ++i) {
    w.u32(index.lengths()[i]);
    w.u32(index.refs()[i].passage_index);
    w.str(index.refs()[i].doc_id);
  }
  w.u32(static_cast<std::uint32_t>(index.postings().size()));
  for (const auto& [term, list] : index.postings()) {
    w.str(term);
    w.u32(static_cast<std::uint32_t>(list.size()));
    for (const auto& p : list) {
      w.u32(p.passage_id);
      w.u32(p.term_frequency);
    }
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

PassageIndex read_index(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  Reader r(in);
  char magic[8];
  r.bytes(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw Error(ErrorCode::ParseError, path + " is not a DQAIDX1 index");
  }
  if (const auto v = r.u32(); v != kVersion) {
    throw Error(ErrorCode::ParseError,
                "unsupported index version " + std::to_string(v));
  }
  PassageIndex index;
  index.params_.k1 = r.f64();
  index.params_.b = r.f64();
  index.avg_len_ = r.f64();
  const std::uint32_t n = r.u32();
  if (n == 0) throw Error(ErrorCode::EmptyCorpus, "index has no passages");
  for (std::uint32_t i = 0; i < n; ++i) {
    index.lengths_.push_back(r.u32());
    PassageRef ref;
    ref.passage_index = r.u32();
    ref.doc_id = r.str();
    index.refs_.push_back(std::move(ref));
  }
  const std::uint32_t terms = r.u32();
  for (std::uint32_t t = 0; t < terms; ++t) {
    std::string term = r.str();
    const std::uint32_t count = r.u32();
    std::vector<Posting> list;
    list.reserve(count);
    for (std::uint32_t k = 0; k < count; ++k) {
      Posting p;
      p.passage_id = r.u32();
      p.term_frequency = r.u32();
      if (p.passage_id >= n || (!list.empty() && p.passage_id <= list.back().passage_id)) {
        throw Error(ErrorCode::ParseError, "corrupt postings for term " + term);
      }
      list.push_back(p);
    }
    index.postings_.emplace(std::move(term), std::move(list));
  }
  return index;
}

}  // namespace dqa::retrieval
