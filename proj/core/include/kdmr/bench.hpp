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

#pragma once

// Timing sweeps over generated test data, and the fits that summarize them.

#include <cstddef>
#include <optional>
#include <vector>

#include "kdmr/fit.hpp"
#include "kdmr/io.hpp"

namespace kdmr {

enum class BenchKind {
  Build,    // distributed build time vs n
  Search,   // distributed search time vs n
  Scaling,  // build and search time vs workers at fixed n
};

struct BenchOptions {
  BenchKind kind = BenchKind::Build;
  // Build/Search: n = 2^min_exp .. 2^max_exp (min_exp >= 4).
  std::size_t min_exp = 4;
  std::size_t max_exp = 12;
  std::size_t workers = 4;
  // Scaling: n = 2^exp, workers 1..max_workers.
  std::size_t exp = 12;
  std::size_t max_workers = 8;
  std::size_t repeats = 3;
  std::size_t partitions = 8;
  // Hybrid cutoff depth. nullopt means kNoCutoff for Scaling and 0
  // otherwise; ignored when auto_cutoff is set.
  std::optional<std::size_t> cutoff;
  bool auto_cutoff = false;
};

struct BenchReport {
  std::vector<BenchRecord> records;
  std::vector<FitResult> fits;  // one per phase measured
};

/// Throws std::invalid_argument for empty or out-of-range sweeps.
BenchReport run_bench(const BenchOptions& options);

/// Minimum time per x over all repeats of `phase`, x ascending. x is n, or
/// the worker count when `by_workers` is set.
std::vector<FitPoint> min_over_repeats(const std::vector<BenchRecord>& records, Phase phase,
                                       bool by_workers);

}  // namespace kdmr
