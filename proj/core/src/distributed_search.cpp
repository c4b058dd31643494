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

#include "kdmr/distributed_search.hpp"

#include <algorithm>
#include <stdexcept>

namespace kdmr {

SearchDataset make_search_dataset(Engine& engine, const std::vector<Box>& boxes) {
  std::vector<std::pair<Name, Box>> items;
  items.reserve(boxes.size());
  for (const Box& b : boxes) items.emplace_back(b.name, b);
  return engine.from_items(std::move(items));
}

QueryDataset init_queries(const SearchDataset& search, std::optional<Name> root) {
  if (!root && !search.is_empty()) {
    throw std::invalid_argument("cannot search an empty tree");
  }
  const Name root_name = root.value_or(0);
  return search.map([root_name](const std::pair<Name, Box>& q) {
    return QueryElement(root_name, q);
  });
}

IterationResult search_iteration(const QueryDataset& queries, const TreeDataset& tree) {
  using Visit = std::pair<std::pair<Name, Box>, NodeRecord>;
  const auto visits = queries.join(tree);

  auto intersections = visits.flat_map([](const std::pair<Name, Visit>& v) {
    const auto& [query, node] = v.second;
    std::vector<IntersectionPair> out;
    if (query.first != v.first && boxes_intersect(query.second, node.box)) {
      out.emplace_back(query.first, v.first);
    }
    return out;
  });

  auto next = visits.flat_map([](const std::pair<Name, Visit>& v) {
    const auto& [query, node] = v.second;
    std::vector<QueryElement> out;
    if (node.lt && intersects_region(query.second, node.lt->region)) {
      out.emplace_back(node.lt->name, query);
    }
    if (node.gt && intersects_region(query.second, node.gt->region)) {
      out.emplace_back(node.gt->name, query);
    }
    return out;
  });
  return {std::move(intersections), std::move(next)};
}

SearchResult run_search(const SearchDataset& search, const TreeDataset& tree) {
  Engine& engine = search.engine();
  QueryDataset queries = init_queries(search, find_root(tree));
  IntersectionDataset cumulative = engine.from_items(std::vector<IntersectionPair>{}, 1);
  std::size_t iterations = 0;
  while (!queries.is_empty()) {
    IterationResult step = search_iteration(queries, tree);
    cumulative = cumulative.union_with(step.intersections);
    queries = std::move(step.next_queries);
    ++iterations;
  }

  auto matches = cumulative.group_by_key().map_values([](std::vector<Name> names) {
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    return names;
  });
  return {std::move(matches), iterations};
}

SearchResult run_search(const SearchDataset& search, const DistributedTree& tree) {
  return run_search(search, tree.entries);
}

}  // namespace kdmr
