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

#include "kdmr/memory_tree.hpp"

#include <algorithm>
#include <future>

namespace kdmr {
namespace {

void count(BuildCounters* counters, std::uint64_t n) {
  if (counters != nullptr) {
    counters->comparisons.fetch_add(n, std::memory_order_relaxed);
  }
}

std::vector<Box> sorted_by(std::span<const Box> boxes, Axis axis,
                           BuildCounters* counters) {
  std::vector<Box> out(boxes.begin(), boxes.end());
  std::uint64_t comparisons = 0;
  std::sort(out.begin(), out.end(), [&](const Box& a, const Box& b) {
    ++comparisons;
    return super_key(a, axis) < super_key(b, axis);
  });
  count(counters, comparisons);
  return out;
}

void search(const KdNode* node, const Box& query, std::vector<Name>& out) {
  if (node->box.name != query.name && boxes_intersect(query, node->box)) {
    out.push_back(node->box.name);
  }
  if (node->less && intersects_region(query, node->less->region)) {
    search(node->less.get(), query, out);
  }
  if (node->greater && intersects_region(query, node->greater->region)) {
    search(node->greater.get(), query, out);
  }
}

}  // namespace

PresortedBoxes presort(std::span<const Box> boxes, BuildCounters* counters) {
  require_unique_names(boxes);
  return {sorted_by(boxes, Axis::XMin, counters),
          sorted_by(boxes, Axis::YMin, counters)};
}

std::pair<std::vector<Box>, std::vector<Box>> sweep_and_partition(
    std::span<const Box> arr, const SuperKey& pivot, Axis pivot_dim,
    BuildCounters* counters) {
  std::vector<Box> less;
  std::vector<Box> greater;
  less.reserve(arr.size() / 2 + 1);
  greater.reserve(arr.size() / 2 + 1);
  for (const Box& b : arr) {
    const auto order = super_key(b, pivot_dim) <=> pivot;
    if (order < 0) {
      less.push_back(b);
    } else if (order > 0) {
      greater.push_back(b);
    }
  }
  count(counters, arr.size());
  return {std::move(less), std::move(greater)};
}

KdTree build_memory_tree(std::span<const Box> x_sorted,
                         std::span<const Box> y_sorted, std::size_t depth,
                         const MemoryBuildOptions& options) {
  if (x_sorted.empty()) return nullptr;

  const Axis axis = split_axis(depth);
  const bool split_on_x = axis == Axis::XMin;
  std::span<const Box> split = split_on_x ? x_sorted : y_sorted;
  std::span<const Box> other = split_on_x ? y_sorted : x_sorted;

  const std::size_t m = median_index(split.size());
  const Box median = split[m];
  auto [other_less, other_greater] =
      sweep_and_partition(other, super_key(median, axis), axis, options.counters);

  std::span<const Box> split_less = split.first(m);
  std::span<const Box> split_greater = split.subspan(m + 1);

  auto build_child = [&](std::span<const Box> split_part,
                         const std::vector<Box>& other_part) {
    return split_on_x
               ? build_memory_tree(split_part, other_part, depth + 1, options)
               : build_memory_tree(other_part, split_part, depth + 1, options);
  };

  KdTree less;
  KdTree greater;
  if (depth < options.parallel_depth && !split_less.empty()) {
    auto pending = std::async(std::launch::async, [&] {
      return build_child(split_less, other_less);
    });
    greater = build_child(split_greater, other_greater);
    less = pending.get();
  } else {
    less = build_child(split_less, other_less);
    greater = build_child(split_greater, other_greater);
  }

  // Regions are computed as the recursion unwinds.
  Region children[2];
  std::size_t n_children = 0;
  if (less) children[n_children++] = less->region;
  if (greater) children[n_children++] = greater->region;

  auto node = std::make_unique<KdNode>();
  node->box = median;
  node->region = merge_region(median, std::span<const Region>(children, n_children));
  node->less = std::move(less);
  node->greater = std::move(greater);
  return node;
}

KdTree build_memory_tree(std::span<const Box> boxes,
                         const MemoryBuildOptions& options) {
  for (const Box& b : boxes) validate(b);
  PresortedBoxes sorted = presort(boxes, options.counters);
  return build_memory_tree(sorted.x_sorted, sorted.y_sorted, 0, options);
}

std::vector<Name> search_memory_tree(const KdNode* root, const Box& query) {
  std::vector<Name> out;
  if (root != nullptr) search(root, query, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t tree_depth(const KdNode* root) noexcept {
  if (root == nullptr) return 0;
  return 1 + std::max(tree_depth(root->less.get()), tree_depth(root->greater.get()));
}

std::size_t tree_size(const KdNode* root) noexcept {
  if (root == nullptr) return 0;
  return 1 + tree_size(root->less.get()) + tree_size(root->greater.get());
}

}  // namespace kdmr
