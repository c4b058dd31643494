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

// The k-d tree as a pair dataset: one (name, node record) element per node,
// children referenced by name instead of by pointer.
//
// The upper levels are built by subdividing four sorted datasets (by x_min,
// y_min, x_max and y_max super keys). Because the first and last elements of
// those datasets give a subtree's bounding region directly, no region has to
// flow back up the recursion. At the cutoff depth the remaining x_min- and
// y_min-sorted datasets are collected and the subtree is built by the
// memory-resident algorithm on an asynchronous task while the coordinator
// carries on subdividing.

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "kdmr/dataset.hpp"
#include "kdmr/geometry.hpp"
#include "kdmr/memory_tree.hpp"

namespace kdmr {

struct ChildLink {
  Name name = 0;
  Region region;

  friend bool operator==(const ChildLink&, const ChildLink&) = default;
};

struct NodeRecord {
  Box box;
  std::optional<ChildLink> lt;
  std::optional<ChildLink> gt;

  friend bool operator==(const NodeRecord&, const NodeRecord&) = default;
};

/// Node name (the name of the box stored there) and its record.
using TreeGraphEntry = std::pair<Name, NodeRecord>;
using TreeDataset = PairDataset<Name, NodeRecord>;
using SortedBoxes = PairDataset<SuperKey, Box>;

struct FourWaySorted {
  SortedBoxes by_x_min;
  SortedBoxes by_y_min;
  SortedBoxes by_x_max;
  SortedBoxes by_y_max;

  const SortedBoxes& by(Axis axis) const noexcept;
};

/// Throws DuplicateNameError, or std::invalid_argument for an invalid box.
FourWaySorted four_way_presort(Engine& engine, std::span<const Box> boxes);

/// Region from the first element of the x_min and y_min datasets and the
/// last element of the x_max and y_max datasets. Throws std::out_of_range if
/// any of them is empty.
Region region_from_sorted(const SortedBoxes& by_x_min, const SortedBoxes& by_y_min,
                          const SortedBoxes& by_x_max, const SortedBoxes& by_y_max);
Region region_from_sorted(const FourWaySorted& sets);

/// Cost-model inputs. c_dataset and c_array are seconds per n*log2(n) for a
/// build by dataset subdivision and by array subdivision respectively.
struct CutoffParams {
  double c_dataset = 1.0;
  double c_array = 1.0;
  std::size_t workers = 1;
  std::size_t n = 0;
};

/// Smallest depth d >= 0 with d > log2(n) - c_dataset / (c_array * workers) - 1,
/// i.e. the shallowest level at which an array build beats another round of
/// dataset subdivision. Throws std::invalid_argument for n == 0 or
/// non-positive constants.
std::size_t cutoff_depth(const CutoffParams& p);

/// Times one dataset subdivision of the root level and one array build of a
/// sample of the input, and converts both into per n*log2(n) constants.
CutoffParams measure_cutoff_params(Engine& engine, std::span<const Box> boxes);

/// Cutoff that is never reached: the whole tree is built on datasets.
inline constexpr std::size_t kNoCutoff = std::numeric_limits<std::size_t>::max();

struct DistributedTree {
  TreeDataset entries;  // sorted by name
  std::optional<Name> root;
};

DistributedTree build_distributed_tree(Engine& engine, std::span<const Box> boxes,
                                       std::size_t cutoff);

/// One entry per node of a memory-resident tree, preorder.
std::vector<TreeGraphEntry> flatten_memory_subtree(const KdNode* root);

/// The unique key no other entry references. nullopt for an empty tree;
/// throws std::invalid_argument if the entries do not form a tree.
std::optional<Name> find_root(const TreeDataset& tree);

/// Number of levels of the tree graph rooted at `root`.
std::size_t tree_graph_depth(std::span<const TreeGraphEntry> entries,
                             std::optional<Name> root);

}  // namespace kdmr
