// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "dqa/corpus.hpp"
#include "dqa/retrieval.hpp"
#include "dqa/synthetic.hpp"
#include "dqa/text.hpp"

namespace {

std::vector<dqa::corpus::Passage> passages(std::size_t docs) {
  dqa::synthetic::SyntheticSpec spec;
  spec.n_docs = docs;
  spec.questions_per_doc = 1;
  std::vector<dqa::corpus::Passage> out;
  for (const auto& d : dqa::synthetic::generate_synthetic(spec).documents) {
    for (auto& p : dqa::corpus::build_passages(d)) out.push_back(std::move(p));
  }
  return out;
}

void BM_IndexBuild(benchmark::State& state) {
  const auto ps = passages(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dqa::retrieval::PassageIndex::build(ps));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ps.size()));
}
BENCHMARK(BM_IndexBuild)->Arg(10)->Arg(100);

void BM_Bm25Rank(benchmark::State& state) {
  const auto ps = passages(static_cast<std::size_t>(state.range(0)));
  const auto index = dqa::retrieval::PassageIndex::build(ps);
  const auto query = dqa::text::tokenize(ps[ps.size() / 2].text.substr(0, 60));
  for (auto _ : state) benchmark::DoNotOptimize(dqa::retrieval::bm25_rank(index, query, 1));
}
BENCHMARK(BM_Bm25Rank)->Arg(10)->Arg(100)->Arg(1000);

}  // namespace
