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

// Breadth-first intersection search of a tree dataset by a dataset of query
// boxes. Every live query is keyed by the name of the node it visits next;
// one iteration joins the queries to the tree, emits (query, node) matches
// and re-keys each query by the children whose regions it overlaps. The
// search ends when no query has a node left to visit.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "kdmr/dataset.hpp"
#include "kdmr/distributed_tree.hpp"
#include "kdmr/geometry.hpp"

namespace kdmr {

using SearchDataset = PairDataset<Name, Box>;
/// (node to visit, (query name, query box)).
using QueryElement = std::pair<Name, std::pair<Name, Box>>;
using QueryDataset = PartitionedDataset<QueryElement>;
/// (query name, tree node name).
using IntersectionPair = std::pair<Name, Name>;
using IntersectionDataset = PartitionedDataset<IntersectionPair>;
using MatchDataset = PairDataset<Name, std::vector<Name>>;

/// Builds (name, box) search elements from boxes.
SearchDataset make_search_dataset(Engine& engine, const std::vector<Box>& boxes);

/// Sends every query to the root. Throws std::invalid_argument when queries
/// exist but the tree is empty (root is nullopt).
QueryDataset init_queries(const SearchDataset& search, std::optional<Name> root);

struct IterationResult {
  IntersectionDataset intersections;
  QueryDataset next_queries;
};

IterationResult search_iteration(const QueryDataset& queries, const TreeDataset& tree);

struct SearchResult {
  MatchDataset matches;  // ascending by query; each list ascending, no duplicates
  std::size_t iterations = 0;
};

SearchResult run_search(const SearchDataset& search, const TreeDataset& tree);
SearchResult run_search(const SearchDataset& search, const DistributedTree& tree);

}  // namespace kdmr
