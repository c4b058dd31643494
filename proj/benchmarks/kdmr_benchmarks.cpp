// Copyright 2026 The kdmr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "kdmr/distributed_search.hpp"
#include "kdmr/distributed_tree.hpp"
#include "kdmr/memory_tree.hpp"
#include "kdmr/test_data.hpp"

namespace kdmr {
namespace {

std::vector<Box> boxes_for(std::int64_t n) {
  return generate_test_data({static_cast<std::size_t>(n) / kBoxesPerSquare, 100.0});
}

void BM_MemoryBuild(benchmark::State& state) {
  const auto boxes = boxes_for(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_memory_tree(boxes));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MemoryBuild)->RangeMultiplier(4)->Range(1 << 8, 1 << 16)->Complexity(benchmark::oNLogN);

// Args: n, workers, cutoff depth (-1 for no cutoff).
void BM_DistributedBuild(benchmark::State& state) {
  const auto boxes = boxes_for(state.range(0));
  Engine engine({static_cast<std::size_t>(state.range(1)), 8});
  const std::size_t cutoff =
      state.range(2) < 0 ? kNoCutoff : static_cast<std::size_t>(state.range(2));
  for (auto _ : state) benchmark::DoNotOptimize(build_distributed_tree(engine, boxes, cutoff));
}
BENCHMARK(BM_DistributedBuild)
    ->ArgsProduct({{1 << 10, 1 << 12}, {1, 4}, {0, 3}})
    ->Args({1 << 10, 1, -1})
    ->Unit(benchmark::kMillisecond);

void BM_DistributedSearch(benchmark::State& state) {
  const auto boxes = boxes_for(state.range(0));
  Engine engine({static_cast<std::size_t>(state.range(1)), 8});
  const auto tree = build_distributed_tree(engine, boxes, 0);
  const auto queries = make_search_dataset(engine, boxes);
  for (auto _ : state) benchmark::DoNotOptimize(run_search(queries, tree));
}
BENCHMARK(BM_DistributedSearch)
    ->ArgsProduct({{1 << 8, 1 << 10, 1 << 12}, {1, 4}})
    ->Unit(benchmark::kMillisecond);

void BM_MemorySearch(benchmark::State& state) {
  const auto boxes = boxes_for(state.range(0));
  const KdTree tree = build_memory_tree(boxes);
  for (auto _ : state) {
    std::size_t hits = 0;
    for (const Box& q : boxes) hits += search_memory_tree(tree.get(), q).size();
    benchmark::DoNotOptimize(hits);
  }
}
BENCHMARK(BM_MemorySearch)->RangeMultiplier(4)->Range(1 << 8, 1 << 14);

}  // namespace
}  // namespace kdmr

BENCHMARK_MAIN();
