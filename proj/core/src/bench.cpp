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

#include "kdmr/bench.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <optional>
#include <stdexcept>

#include "kdmr/distributed_search.hpp"
#include "kdmr/distributed_tree.hpp"
#include "kdmr/test_data.hpp"

namespace kdmr {
namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double seconds(F&& fn) {
  const auto start = Clock::now();
  fn();
  const std::chrono::duration<double> elapsed = Clock::now() - start;
  return elapsed.count();
}

std::vector<Box> boxes_for(std::size_t n) {
  return generate_test_data({n / kBoxesPerSquare, 100.0});
}

std::size_t pick_cutoff(const BenchOptions& o, Engine& engine, const std::vector<Box>& boxes) {
  if (o.auto_cutoff) return cutoff_depth(measure_cutoff_params(engine, boxes));
  if (o.cutoff) return *o.cutoff;
  return o.kind == BenchKind::Scaling ? kNoCutoff : 0;
}

void measure(const BenchOptions& o, Phase phase, std::size_t n, std::size_t workers,
             std::vector<BenchRecord>& out) {
  Engine engine({workers, o.partitions});
  const std::vector<Box> boxes = boxes_for(n);
  const std::size_t cutoff = pick_cutoff(o, engine, boxes);
  std::optional<DistributedTree> tree;
  if (phase == Phase::Search) tree = build_distributed_tree(engine, boxes, cutoff);
  const SearchDataset queries = make_search_dataset(engine, boxes);

  for (std::size_t r = 0; r < o.repeats; ++r) {
    double t = 0.0;
    if (phase == Phase::Build) {
      t = seconds([&] { build_distributed_tree(engine, boxes, cutoff); });
    } else {
      t = seconds([&] { run_search(queries, *tree); });
    }
    out.push_back({phase, n, workers, r, t});
  }
}

}  // namespace

std::vector<FitPoint> min_over_repeats(const std::vector<BenchRecord>& records, Phase phase,
                                       bool by_workers) {
  std::map<std::size_t, double> best;
  for (const auto& r : records) {
    if (r.phase != phase) continue;
    const std::size_t x = by_workers ? r.workers : r.n;
    auto [it, inserted] = best.emplace(x, r.seconds);
    if (!inserted) it->second = std::min(it->second, r.seconds);
  }
  std::vector<FitPoint> out;
  for (const auto& [x, t] : best) out.push_back({static_cast<double>(x), t});
  return out;
}

BenchReport run_bench(const BenchOptions& o) {
  if (o.repeats < 1) throw std::invalid_argument("repeats must be >= 1");
  BenchReport report;
  if (o.kind == BenchKind::Scaling) {
    if (o.exp < 4 || o.exp > 30) throw std::invalid_argument("exp must be in [4, 30]");
    if (o.max_workers < 1) throw std::invalid_argument("max-workers must be >= 1");
    const std::size_t n = std::size_t{1} << o.exp;
    for (std::size_t w = 1; w <= o.max_workers; ++w) {
      measure(o, Phase::Build, n, w, report.records);
      measure(o, Phase::Search, n, w, report.records);
    }
    if (o.max_workers >= 3) {
      for (Phase p : {Phase::Build, Phase::Search}) {
        FitResult fit = fit_scaling_model(min_over_repeats(report.records, p, true));
        fit.model = std::string(to_string(p)) + "_scaling";
        report.fits.push_back(std::move(fit));
      }
    }
    return report;
  }

  if (o.min_exp < 4 || o.max_exp > 30 || o.min_exp > o.max_exp) {
    throw std::invalid_argument("need 4 <= min-exp <= max-exp <= 30");
  }
  if (o.workers < 1) throw std::invalid_argument("workers must be >= 1");
  const Phase phase = o.kind == BenchKind::Build ? Phase::Build : Phase::Search;
  for (std::size_t e = o.min_exp; e <= o.max_exp; ++e) {
    measure(o, phase, std::size_t{1} << e, o.workers, report.records);
  }
  if (o.max_exp > o.min_exp) {
    FitResult fit = fit_linear_nlogn(min_over_repeats(report.records, phase, false));
    fit.model = std::string(to_string(phase)) + "_nlogn";
    report.fits.push_back(std::move(fit));
  }
  return report;
}

}  // namespace kdmr
