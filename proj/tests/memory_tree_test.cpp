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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "kdmr/memory_tree.hpp"
#include "kdmr/test_data.hpp"
#include "test_util.hpp"

namespace kdmr {
namespace {

using testing::random_boxes;

std::vector<Name> names_of(const std::vector<Box>& boxes) {
  std::vector<Name> out;
  for (const Box& b : boxes) out.push_back(b.name);
  return out;
}

bool same_shape(const KdNode* a, const KdNode* b) {
  if (a == nullptr || b == nullptr) return a == b;
  return a->box == b->box && a->region == b->region && same_shape(a->less.get(), b->less.get()) &&
         same_shape(a->greater.get(), b->greater.get());
}

TEST(Presort, SortsByCoordinateThenName) {
  const std::vector<Box> boxes{{1, 3, 0, 4, 1}, {2, 1, 5, 2, 6}, {3, 2, 2, 3, 3}};
  const auto sorted = presort(boxes);
  EXPECT_EQ(names_of(sorted.x_sorted), (std::vector<Name>{2, 3, 1}));
  EXPECT_EQ(names_of(sorted.y_sorted), (std::vector<Name>{1, 3, 2}));
}

TEST(Presort, TieBrokenByName) {
  const std::vector<Box> boxes{{2, 5, 0, 6, 1}, {1, 5, 0, 6, 1}};
  EXPECT_EQ(names_of(presort(boxes).x_sorted), (std::vector<Name>{1, 2}));
}

TEST(Presort, EmptyAndDuplicates) {
  const auto sorted = presort(std::vector<Box>{});
  EXPECT_TRUE(sorted.x_sorted.empty());
  EXPECT_TRUE(sorted.y_sorted.empty());
  const std::vector<Box> dup{{7, 0, 0, 1, 1}, {7, 2, 2, 3, 3}};
  EXPECT_THROW(presort(dup), DuplicateNameError);
}

TEST(SweepAndPartition, OneEachSide) {
  // (x_min, name): (5,a) (1,b) (9,c), already in y order.
  const std::vector<Box> arr{{1, 5, 0, 6, 1}, {2, 1, 1, 2, 2}, {3, 9, 2, 10, 3}};
  auto [less, greater] = sweep_and_partition(arr, SuperKey{5, 1}, Axis::XMin);
  EXPECT_EQ(names_of(less), (std::vector<Name>{2}));
  EXPECT_EQ(names_of(greater), (std::vector<Name>{3}));
}

TEST(SweepAndPartition, PivotOnlyIsDropped) {
  const std::vector<Box> arr{{1, 5, 0, 6, 1}};
  auto [less, greater] = sweep_and_partition(arr, SuperKey{5, 1}, Axis::XMin);
  EXPECT_TRUE(less.empty());
  EXPECT_TRUE(greater.empty());
}

TEST(SweepAndPartition, MatchesFilterOfPresortedList) {
  const auto boxes = random_boxes(20, 99, 10, 3);
  const auto sorted = presort(boxes);
  for (const Box& pivot_box : boxes) {
    const SuperKey pivot = super_key(pivot_box, Axis::XMin);
    auto [less, greater] = sweep_and_partition(sorted.y_sorted, pivot, Axis::XMin);
    std::vector<Box> expect_less;
    std::vector<Box> expect_greater;
    for (const Box& b : sorted.y_sorted) {
      const std::pair key{b.x_min, b.name};
      const std::pair piv{pivot_box.x_min, pivot_box.name};
      if (key < piv) expect_less.push_back(b);
      if (piv < key) expect_greater.push_back(b);
    }
    EXPECT_EQ(less, expect_less);
    EXPECT_EQ(greater, expect_greater);
    EXPECT_EQ(less.size() + greater.size() + 1, boxes.size());
  }
}

TEST(BuildMemoryTree, SingleBoxIsLeaf) {
  const std::vector<Box> boxes{{4, 1, 2, 3, 4}};
  KdTree tree = build_memory_tree(boxes);
  ASSERT_TRUE(tree);
  EXPECT_EQ(tree->region, Region::of(boxes[0]));
  EXPECT_FALSE(tree->less);
  EXPECT_FALSE(tree->greater);
}

TEST(BuildMemoryTree, EmptyInputGivesNoTree) {
  EXPECT_EQ(build_memory_tree(std::vector<Box>{}), nullptr);
}

TEST(BuildMemoryTree, MedianOfThree) {
  const std::vector<Box> boxes{{1, 9, 0, 10, 1}, {2, 1, 5, 2, 6}, {3, 4, 2, 5, 3}};
  KdTree tree = build_memory_tree(boxes);
  EXPECT_EQ(tree->box.name, 3u);
  ASSERT_TRUE(tree->less && tree->greater);
  EXPECT_EQ(tree->less->box.name, 2u);
  EXPECT_EQ(tree->greater->box.name, 1u);
  EXPECT_EQ(tree_depth(tree.get()), 2u);
}

TEST(BuildMemoryTree, SevenBoxesExhaustive) {
  const auto boxes = random_boxes(7, 3);
  KdTree tree = build_memory_tree(boxes);
  EXPECT_EQ(tree_depth(tree.get()), 3u);
  EXPECT_EQ(tree_size(tree.get()), 7u);
  EXPECT_TRUE(testing::exhaustive_tree_check(tree.get()));
}

TEST(BuildMemoryTree, ExhaustiveCheckOnManySizes) {
  for (std::size_t n : {2, 5, 16, 33, 100, 257, 1000}) {
    const auto boxes = random_boxes(n, n, 30, 6);
    KdTree tree = build_memory_tree(boxes);
    EXPECT_EQ(tree_size(tree.get()), n);
    EXPECT_TRUE(testing::exhaustive_tree_check(tree.get())) << "n=" << n;
  }
}

TEST(BuildMemoryTree, BalancedForEveryN) {
  const auto pool = random_boxes(4096, 8, 500, 10);
  for (std::size_t n = 1; n <= pool.size(); ++n) {
    KdTree tree = build_memory_tree(std::span<const Box>(pool.data(), n));
    ASSERT_LE(tree_depth(tree.get()), testing::floor_log2(n) + 1) << "n=" << n;
  }
}

TEST(BuildMemoryTree, ParallelBuildIsIdentical) {
  const auto boxes = random_boxes(3000, 12);
  KdTree sequential = build_memory_tree(boxes);
  for (std::size_t depth : {1, 3, 6}) {
    KdTree parallel = build_memory_tree(boxes, {depth, nullptr});
    EXPECT_TRUE(same_shape(sequential.get(), parallel.get())) << "parallel_depth=" << depth;
  }
  EXPECT_TRUE(same_shape(sequential.get(), build_memory_tree(boxes).get()));
}

TEST(BuildMemoryTree, ComparisonCountGrowsLikeNLogN) {
  std::vector<double> counts;
  for (std::size_t e = 10; e <= 14; ++e) {
    BuildCounters counters;
    const auto boxes = random_boxes(std::size_t{1} << e, e, 1 << 16, 10);
    build_memory_tree(boxes, {0, &counters});
    counts.push_back(static_cast<double>(counters.comparisons.load()));
  }
  for (std::size_t i = 1; i < counts.size(); ++i) {
    EXPECT_LT(counts[i] / counts[i - 1], 2.4);
    EXPECT_GT(counts[i] / counts[i - 1], 2.0);
  }
}

TEST(SearchMemoryTree, SelfIsExcluded) {
  const std::vector<Box> boxes{{1, 0, 0, 1, 1}};
  KdTree tree = build_memory_tree(boxes);
  EXPECT_TRUE(search_memory_tree(tree.get(), boxes[0]).empty());
}

TEST(SearchMemoryTree, TwoDisjointBoxes) {
  const std::vector<Box> boxes{{1, 0, 0, 1, 1}, {2, 5, 5, 6, 6}};
  KdTree tree = build_memory_tree(boxes);
  EXPECT_EQ(search_memory_tree(tree.get(), Box{99, 5.5, 5.5, 7, 7}), (std::vector<Name>{2}));
  EXPECT_TRUE(search_memory_tree(tree.get(), Box{99, 2, 2, 3, 3}).empty());
  EXPECT_TRUE(search_memory_tree(nullptr, boxes[0]).empty());
}

TEST(SearchMemoryTree, MatchesBruteForce) {
  for (std::size_t n : {100, 400, 1024}) {
    const auto boxes = random_boxes(n, 1000 + n, 64, 8);
    KdTree tree = build_memory_tree(boxes);
    const MatchMap oracle = brute_force_intersections(boxes);
    for (const Box& q : boxes) {
      const auto got = search_memory_tree(tree.get(), q);
      auto it = oracle.find(q.name);
      if (it == oracle.end()) {
        EXPECT_TRUE(got.empty());
      } else {
        EXPECT_EQ(got, it->second);
      }
    }
  }
}

TEST(MemoryTreeProperties, RegionContainsEverySubtreeBox) {
  const auto boxes = random_boxes(512, 77);
  KdTree tree = build_memory_tree(boxes);
  std::vector<const KdNode*> stack{tree.get()};
  while (!stack.empty()) {
    const KdNode* node = stack.back();
    stack.pop_back();
    std::vector<Box> below;
    testing::subtree_boxes(node, below);
    for (const Box& b : below) ASSERT_TRUE(node->region.contains(b));
    if (node->less) stack.push_back(node->less.get());
    if (node->greater) stack.push_back(node->greater.get());
  }
}

}  // namespace
}  // namespace kdmr
