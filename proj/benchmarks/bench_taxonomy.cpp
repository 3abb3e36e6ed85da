// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "dqa/synthetic.hpp"
#include "dqa/taxonomy.hpp"

namespace {

void BM_TrainL1(benchmark::State& state) {
  const auto data = dqa::synthetic::template_questions(
      {static_cast<std::size_t>(state.range(0)), 42});
  for (auto _ : state) benchmark::DoNotOptimize(dqa::taxonomy::train(data, dqa::taxonomy::Level::L1));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.size()));
}
BENCHMARK(BM_TrainL1)->Arg(20)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_Classify(benchmark::State& state) {
  const auto model = dqa::synthetic::default_model();
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.classify("Does the document state who is teaching the course?"));
  }
}
BENCHMARK(BM_Classify);

}  // namespace
