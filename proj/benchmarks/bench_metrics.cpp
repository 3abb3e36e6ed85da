// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "dqa/metrics.hpp"
#include "dqa/random.hpp"

namespace {

std::vector<std::string> tokens(std::size_t n, std::uint64_t seed) {
  dqa::Rng rng(seed);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("w" + std::to_string(rng.index(50)));
  return out;
}

void BM_RougeL(benchmark::State& state) {
  const auto a = tokens(static_cast<std::size_t>(state.range(0)), 1);
  const auto b = tokens(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(dqa::metrics::rouge_l(a, b));
}
BENCHMARK(BM_RougeL)->Arg(16)->Arg(128)->Arg(512);

void BM_Rouge2(benchmark::State& state) {
  const auto a = tokens(static_cast<std::size_t>(state.range(0)), 1);
  const auto b = tokens(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(dqa::metrics::rouge_n(a, b, 2));
}
BENCHMARK(BM_Rouge2)->Arg(16)->Arg(128)->Arg(512);

}  // namespace
