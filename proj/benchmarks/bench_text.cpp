// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "dqa/corpus.hpp"
#include "dqa/synthetic.hpp"

namespace {

void BM_SplitSentences(benchmark::State& state) {
  dqa::synthetic::SyntheticSpec spec;
  spec.n_docs = 1;
  spec.sentences_per_doc = static_cast<std::size_t>(state.range(0));
  const auto body = dqa::synthetic::generate_synthetic(spec).documents.front().body;
  for (auto _ : state) benchmark::DoNotOptimize(dqa::corpus::split_sentences(body));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(body.size()));
}
BENCHMARK(BM_SplitSentences)->Arg(20)->Arg(200)->Arg(2000);

}  // namespace
