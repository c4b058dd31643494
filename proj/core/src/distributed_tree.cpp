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

#include "kdmr/distributed_tree.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace kdmr {
namespace {

using Clock = std::chrono::steady_clock;

SortedBoxes sorted_dataset(Engine& engine, std::span<const Box> boxes, Axis axis) {
  std::vector<std::pair<SuperKey, Box>> keyed;
  keyed.reserve(boxes.size());
  for (const Box& b : boxes) keyed.emplace_back(super_key(b, axis), b);
  return engine.from_items(std::move(keyed)).sort_by_key();
}

std::vector<Box> boxes_of(const SortedBoxes& ds) {
  std::vector<Box> out;
  out.reserve(ds.count());
  for (std::size_t i = 0; i < ds.num_partitions(); ++i) {
    for (const auto& kv : ds.partition(i)) out.push_back(kv.second);
  }
  return out;
}

struct LevelSplit {
  Box median;
  FourWaySorted less;
  FourWaySorted greater;
};

// One subdivision step: the split-axis dataset is cut at its median, the
// other three are filtered by the median's super key on the split axis.
LevelSplit subdivide(const FourWaySorted& sets, Axis axis) {
  const SortedBoxes& split = sets.by(axis);
  auto [less, median_kv, greater] = split.split_at(median_index(split.count()));
  const SuperKey pivot = super_key(median_kv.second, axis);

  auto side = [&](const SortedBoxes& ds, bool below) {
    if (&ds == &split) return below ? less : greater;
    return ds.filter([&](const std::pair<SuperKey, Box>& kv) {
      const auto order = super_key(kv.second, axis) <=> pivot;
      return below ? order < 0 : order > 0;
    });
  };
  return {median_kv.second,
          {side(sets.by_x_min, true), side(sets.by_y_min, true),
           side(sets.by_x_max, true), side(sets.by_y_max, true)},
          {side(sets.by_x_min, false), side(sets.by_y_min, false),
           side(sets.by_x_max, false), side(sets.by_y_max, false)}};
}

class Builder {
 public:
  Builder(Engine& engine, std::size_t cutoff)
      : cutoff_(cutoff), subtree_pool_(engine.config().workers) {}

  ChildLink build(const FourWaySorted& sets, std::size_t depth) {
    const Region region = region_from_sorted(sets);
    const Axis axis = split_axis(depth);

    if (depth >= cutoff_) {
      std::vector<Box> x_sorted = boxes_of(sets.by_x_min);
      std::vector<Box> y_sorted = boxes_of(sets.by_y_min);
      const auto& split = axis == Axis::XMin ? x_sorted : y_sorted;
      const Name root = split[median_index(split.size())].name;
      subtrees_.push_back(subtree_pool_.submit(
          [x = std::move(x_sorted), y = std::move(y_sorted), depth] {
            KdTree tree = build_memory_tree(x, y, depth);
            return flatten_memory_subtree(tree.get());
          }));
      return {root, region};
    }

    LevelSplit level = subdivide(sets, axis);
    NodeRecord record{level.median, std::nullopt, std::nullopt};
    if (!level.less.by_x_min.is_empty()) record.lt = build(level.less, depth + 1);
    if (!level.greater.by_x_min.is_empty()) record.gt = build(level.greater, depth + 1);
    entries_.emplace_back(level.median.name, std::move(record));
    return {level.median.name, region};
  }

  // Final barrier: waits for every subtree task.
  std::vector<TreeGraphEntry> finish() {
    std::vector<TreeGraphEntry> all = std::move(entries_);
    for (auto& pending : subtrees_) {
      std::vector<TreeGraphEntry> part = pending.get();
      all.insert(all.end(), std::make_move_iterator(part.begin()),
                 std::make_move_iterator(part.end()));
    }
    std::sort(all.begin(), all.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return all;
  }

 private:
  std::size_t cutoff_;
  WorkerPool subtree_pool_;
  std::vector<TreeGraphEntry> entries_;
  std::vector<std::future<std::vector<TreeGraphEntry>>> subtrees_;
};

void flatten(const KdNode* node, std::vector<TreeGraphEntry>& out) {
  NodeRecord record{node->box, std::nullopt, std::nullopt};
  if (node->less) record.lt = ChildLink{node->less->box.name, node->less->region};
  if (node->greater) record.gt = ChildLink{node->greater->box.name, node->greater->region};
  out.emplace_back(node->box.name, std::move(record));
  if (node->less) flatten(node->less.get(), out);
  if (node->greater) flatten(node->greater.get(), out);
}

}  // namespace

const SortedBoxes& FourWaySorted::by(Axis axis) const noexcept {
  switch (axis) {
    case Axis::XMin:
      return by_x_min;
    case Axis::YMin:
      return by_y_min;
    case Axis::XMax:
      return by_x_max;
    case Axis::YMax:
      return by_y_max;
  }
  return by_x_min;
}

FourWaySorted four_way_presort(Engine& engine, std::span<const Box> boxes) {
  for (const Box& b : boxes) validate(b);
  require_unique_names(boxes);
  return {sorted_dataset(engine, boxes, Axis::XMin), sorted_dataset(engine, boxes, Axis::YMin),
          sorted_dataset(engine, boxes, Axis::XMax), sorted_dataset(engine, boxes, Axis::YMax)};
}

Region region_from_sorted(const SortedBoxes& by_x_min, const SortedBoxes& by_y_min,
                          const SortedBoxes& by_x_max, const SortedBoxes& by_y_max) {
  return {by_x_min.first().second.x_min, by_y_min.first().second.y_min,
          by_x_max.last().second.x_max, by_y_max.last().second.y_max};
}

Region region_from_sorted(const FourWaySorted& sets) {
  return region_from_sorted(sets.by_x_min, sets.by_y_min, sets.by_x_max, sets.by_y_max);
}

std::size_t cutoff_depth(const CutoffParams& p) {
  if (p.n == 0) throw std::invalid_argument("cutoff_depth needs n > 0");
  if (!(p.c_dataset > 0.0) || !(p.c_array > 0.0) || p.workers < 1) {
    throw std::invalid_argument("cutoff_depth needs positive constants and workers");
  }
  const double bound = std::log2(static_cast<double>(p.n)) -
                       p.c_dataset / (p.c_array * static_cast<double>(p.workers)) - 1.0;
  if (bound < 0.0) return 0;
  return static_cast<std::size_t>(std::floor(bound)) + 1;
}

CutoffParams measure_cutoff_params(Engine& engine, std::span<const Box> boxes) {
  if (boxes.empty()) throw std::invalid_argument("cannot measure on an empty input");
  constexpr int kRepeats = 3;
  const std::size_t n = boxes.size();

  const FourWaySorted sets = four_way_presort(engine, boxes);
  double level_seconds = std::numeric_limits<double>::infinity();
  for (int r = 0; r < kRepeats; ++r) {
    const auto start = Clock::now();
    LevelSplit level = subdivide(sets, Axis::XMin);
    const std::chrono::duration<double> elapsed = Clock::now() - start;
    level_seconds = std::min(level_seconds, elapsed.count());
  }

  const std::size_t sample = std::clamp<std::size_t>(n, 2, 4096);
  std::vector<Box> sample_boxes(boxes.begin(), boxes.begin() + std::min(n, sample));
  // A single box is padded with a disjoint copy so that log2(m) > 0.
  if (sample_boxes.size() < 2) {
    Box extra = sample_boxes.front();
    extra.name = extra.name + 1;
    extra.x_min = extra.x_max + 1.0;
    extra.x_max = extra.x_min;
    sample_boxes.push_back(extra);
  }
  const PresortedBoxes sorted = presort(sample_boxes);
  double array_seconds = std::numeric_limits<double>::infinity();
  for (int r = 0; r < kRepeats; ++r) {
    const auto start = Clock::now();
    KdTree tree = build_memory_tree(sorted.x_sorted, sorted.y_sorted, 0);
    const std::chrono::duration<double> elapsed = Clock::now() - start;
    array_seconds = std::min(array_seconds, elapsed.count());
  }

  const double m = static_cast<double>(sample_boxes.size());
  const std::size_t w = engine.config().workers;
  constexpr double kFloor = 1e-12;
  return {std::max(level_seconds * static_cast<double>(w) / static_cast<double>(n), kFloor),
          std::max(array_seconds / (m * std::log2(m)), kFloor), w, n};
}

DistributedTree build_distributed_tree(Engine& engine, std::span<const Box> boxes,
                                       std::size_t cutoff) {
  if (boxes.empty()) return {engine.from_items(std::vector<TreeGraphEntry>{}), std::nullopt};
  const FourWaySorted sets = four_way_presort(engine, boxes);
  Builder builder(engine, cutoff);
  const Name root = builder.build(sets, 0).name;
  return {engine.from_items(builder.finish()), root};
}

std::vector<TreeGraphEntry> flatten_memory_subtree(const KdNode* root) {
  std::vector<TreeGraphEntry> out;
  if (root != nullptr) flatten(root, out);
  return out;
}

std::optional<Name> find_root(const TreeDataset& tree) {
  const std::vector<TreeGraphEntry> entries = tree.collect();
  if (entries.empty()) return std::nullopt;

  std::unordered_set<Name> keys;
  for (const auto& [name, record] : entries) {
    if (!keys.insert(name).second) {
      throw std::invalid_argument("tree has duplicate node " + std::to_string(name));
    }
  }
  std::unordered_set<Name> referenced;
  for (const auto& [name, record] : entries) {
    for (const auto& link : {record.lt, record.gt}) {
      if (!link) continue;
      if (!keys.contains(link->name)) {
        throw std::invalid_argument("node " + std::to_string(name) +
                                    " references missing node " +
                                    std::to_string(link->name));
      }
      if (!referenced.insert(link->name).second) {
        throw std::invalid_argument("node " + std::to_string(link->name) +
                                    " has more than one parent");
      }
    }
  }
  std::optional<Name> root;
  for (const auto& [name, record] : entries) {
    if (referenced.contains(name)) continue;
    if (root) throw std::invalid_argument("tree has more than one root");
    root = name;
  }
  if (!root) throw std::invalid_argument("tree has no root (cycle)");
  std::unordered_map<Name, const NodeRecord*> index;
  for (const auto& [name, record] : entries) index.emplace(name, &record);
  std::size_t reachable = 0;
  std::vector<Name> stack{*root};
  while (!stack.empty()) {
    const NodeRecord* record = index.at(stack.back());
    stack.pop_back();
    ++reachable;
    if (record->lt) stack.push_back(record->lt->name);
    if (record->gt) stack.push_back(record->gt->name);
  }
  // Nodes unreachable from the root sit on a cycle.
  if (reachable != entries.size()) throw std::invalid_argument("tree graph contains a cycle");
  return root;
}

std::size_t tree_graph_depth(std::span<const TreeGraphEntry> entries,
                             std::optional<Name> root) {
  if (!root) return 0;
  std::unordered_map<Name, const NodeRecord*> index;
  for (const auto& [name, record] : entries) index.emplace(name, &record);

  // Level-order walk, bounded by the entry count so a cycle cannot loop.
  std::vector<Name> level{*root};
  std::size_t depth = 0;
  std::size_t visited = 0;
  while (!level.empty()) {
    ++depth;
    std::vector<Name> next;
    for (Name name : level) {
      if (++visited > entries.size()) {
        throw std::invalid_argument("tree graph contains a cycle");
      }
      auto it = index.find(name);
      if (it == index.end()) {
        throw std::invalid_argument("missing node " + std::to_string(name));
      }
      if (it->second->lt) next.push_back(it->second->lt->name);
      if (it->second->gt) next.push_back(it->second->gt->name);
    }
    level = std::move(next);
  }
  return depth;
}

}  // namespace kdmr
