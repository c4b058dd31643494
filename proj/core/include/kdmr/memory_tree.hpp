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

// Memory-resident balanced k-d tree over bounding boxes, built by presorting
// in x_min and y_min and then subdividing both sorted arrays level by level:
// the split-axis array is cut at its median, the other array is swept once
// and partitioned stably by the median's super key.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "kdmr/geometry.hpp"

namespace kdmr {

struct KdNode {
  Box box;
  std::unique_ptr<const KdNode> less;
  std::unique_ptr<const KdNode> greater;
  Region region;
};

using KdTree = std::unique_ptr<const KdNode>;

struct PresortedBoxes {
  std::vector<Box> x_sorted;
  std::vector<Box> y_sorted;
};

/// Optional instrumentation; counts super-key comparisons made by presort
/// and by every sweep.
struct BuildCounters {
  std::atomic<std::uint64_t> comparisons{0};
};

struct MemoryBuildOptions {
  // Child subtrees of nodes shallower than this depth are built as two
  // concurrent tasks. 0 builds everything on the calling thread.
  std::size_t parallel_depth = 0;
  BuildCounters* counters = nullptr;
};

/// Throws DuplicateNameError when names repeat.
PresortedBoxes presort(std::span<const Box> boxes,
                       BuildCounters* counters = nullptr);

/// Stable single-pass split of `arr` around `pivot`, comparing each
/// element's super key on `pivot_dim`. The element equal to the pivot is
/// dropped.
std::pair<std::vector<Box>, std::vector<Box>> sweep_and_partition(
    std::span<const Box> arr, const SuperKey& pivot, Axis pivot_dim,
    BuildCounters* counters = nullptr);

/// Index of the median element of a sorted list of length n.
constexpr std::size_t median_index(std::size_t n) noexcept { return n / 2; }

/// Builds the subtree rooted at `depth` from two sorted views of the same
/// boxes. Empty input yields a null tree.
KdTree build_memory_tree(std::span<const Box> x_sorted,
                         std::span<const Box> y_sorted, std::size_t depth = 0,
                         const MemoryBuildOptions& options = {});

/// Validates, presorts and builds from depth 0.
KdTree build_memory_tree(std::span<const Box> boxes,
                         const MemoryBuildOptions& options = {});

/// Names of every tree box intersecting `query`, excluding the query's own
/// name, ascending.
std::vector<Name> search_memory_tree(const KdNode* root, const Box& query);

/// Number of levels; 0 for an empty tree.
std::size_t tree_depth(const KdNode* root) noexcept;
std::size_t tree_size(const KdNode* root) noexcept;

}  // namespace kdmr
