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

// A small in-process MapReduce-style engine. A PartitionedDataset is an
// immutable, ordered sequence of elements split into partitions; operators
// evaluate eagerly, process partitions concurrently on the engine's worker
// pool and return a new dataset. Logical content is always the
// concatenation of the partitions in order, and only sort_by_key and
// group_by_key reorder elements, so every result is independent of the
// number of workers.
//
// A dataset whose element type is std::pair<K, V> is a pair dataset and also
// offers the keyed operators (map_values, flat_map_values, sort_by_key, join,
// group_by_key).

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kdmr/worker_pool.hpp"

namespace kdmr {

struct EngineConfig {
  std::size_t workers = 1;
  std::size_t partitions_per_dataset = 8;
};

template <class T>
class PartitionedDataset;

template <class T>
struct is_pair : std::false_type {};
template <class K, class V>
struct is_pair<std::pair<K, V>> : std::true_type {};

template <class T>
concept PairElement = is_pair<T>::value;

template <class K, class V>
using PairDataset = PartitionedDataset<std::pair<K, V>>;

/// Owns the worker pool that dataset operators run on. Datasets keep a
/// reference to their engine, which must outlive them.
class Engine {
 public:
  explicit Engine(EngineConfig config = {})
      : config_(validated(config)), pool_(config_.workers) {}

  const EngineConfig& config() const noexcept { return config_; }
  WorkerPool& pool() noexcept { return pool_; }

  /// Splits items into contiguous chunks whose sizes differ by at most one.
  template <class T>
  PartitionedDataset<T> from_items(std::vector<T> items,
                                   std::size_t num_partitions);
  template <class T>
  PartitionedDataset<T> from_items(std::vector<T> items) {
    return from_items(std::move(items), config_.partitions_per_dataset);
  }

 private:
  static EngineConfig validated(EngineConfig c) {
    if (c.workers < 1) throw std::invalid_argument("workers must be >= 1");
    if (c.partitions_per_dataset < 1) {
      throw std::invalid_argument("partitions must be >= 1");
    }
    return c;
  }

  EngineConfig config_;
  WorkerPool pool_;
};

template <class T>
struct SplitResult;

template <class T>
class PartitionedDataset {
 public:
  using value_type = T;
  using Partition = std::shared_ptr<const std::vector<T>>;

  PartitionedDataset(Engine& engine, std::vector<Partition> partitions)
      : engine_(&engine), partitions_(std::move(partitions)) {}

  Engine& engine() const noexcept { return *engine_; }
  std::size_t num_partitions() const noexcept { return partitions_.size(); }
  std::span<const T> partition(std::size_t i) const { return *partitions_.at(i); }

  template <class F>
  auto map(F fn) const {
    using U = std::decay_t<std::invoke_result_t<F&, const T&>>;
    return transform_partitions<U>([&](const std::vector<T>& in, std::vector<U>& out) {
      out.reserve(in.size());
      for (const T& x : in) out.push_back(fn(x));
    });
  }

  template <class F>
  PartitionedDataset filter(F predicate) const {
    return transform_partitions<T>([&](const std::vector<T>& in, std::vector<T>& out) {
      for (const T& x : in) {
        if (predicate(x)) out.push_back(x);
      }
    });
  }

  /// fn returns a container of output elements for each input element.
  template <class F>
  auto flat_map(F fn) const {
    using Range = std::decay_t<std::invoke_result_t<F&, const T&>>;
    using U = typename Range::value_type;
    return transform_partitions<U>([&](const std::vector<T>& in, std::vector<U>& out) {
      for (const T& x : in) {
        for (auto&& y : fn(x)) out.push_back(std::move(y));
      }
    });
  }

  template <class F>
    requires PairElement<T>
  auto map_values(F fn) const {
    using K = typename T::first_type;
    using V2 = std::decay_t<std::invoke_result_t<F&, const typename T::second_type&>>;
    return map([&](const T& kv) { return std::pair<K, V2>(kv.first, fn(kv.second)); });
  }

  /// fn maps each value to 0..m values; every output keeps the input key.
  template <class F>
    requires PairElement<T>
  auto flat_map_values(F fn) const {
    using K = typename T::first_type;
    using Range = std::decay_t<std::invoke_result_t<F&, const typename T::second_type&>>;
    using V2 = typename Range::value_type;
    using U = std::pair<K, V2>;
    return transform_partitions<U>([&](const std::vector<T>& in, std::vector<U>& out) {
      for (const T& kv : in) {
        for (auto&& v : fn(kv.second)) out.emplace_back(kv.first, std::move(v));
      }
    });
  }

  /// Global ascending order by key. Each partition is sorted on a worker and
  /// the sorted runs are merged; equal keys keep their dataset order.
  PartitionedDataset sort_by_key() const
    requires PairElement<T>
  {
    const std::size_t p = num_partitions();
    std::vector<std::vector<T>> runs(p);
    engine_->pool().parallel_for(p, [&](std::size_t i) {
      runs[i] = *partitions_[i];
      std::stable_sort(runs[i].begin(), runs[i].end(),
                       [](const T& a, const T& b) { return a.first < b.first; });
    });

    // k-way merge; ties go to the lower run index.
    using Cursor = std::pair<std::size_t, std::size_t>;  // run, position
    auto after = [&](const Cursor& a, const Cursor& b) {
      const auto& ka = runs[a.first][a.second].first;
      const auto& kb = runs[b.first][b.second].first;
      if (kb < ka) return true;
      if (ka < kb) return false;
      return a.first > b.first;
    };
    std::priority_queue<Cursor, std::vector<Cursor>, decltype(after)> heap(after);
    std::size_t total = 0;
    for (std::size_t r = 0; r < p; ++r) {
      total += runs[r].size();
      if (!runs[r].empty()) heap.emplace(r, 0);
    }
    std::vector<T> merged;
    merged.reserve(total);
    while (!heap.empty()) {
      auto [r, pos] = heap.top();
      heap.pop();
      merged.push_back(std::move(runs[r][pos]));
      if (pos + 1 < runs[r].size()) heap.emplace(r, pos + 1);
    }
    return engine_->from_items(std::move(merged), p);
  }

  /// Inner join. Emits one pair per matching (left, right) element, in left
  /// dataset order; the right side is indexed in a hash table.
  template <PairElement R>
    requires PairElement<T> && std::same_as<typename R::first_type, typename T::first_type>
  auto join(const PartitionedDataset<R>& right) const {
    using K = typename T::first_type;
    using V1 = typename T::second_type;
    using V2 = typename R::second_type;
    using U = std::pair<K, std::pair<V1, V2>>;
    std::unordered_map<K, std::vector<const V2*>> index;
    for (std::size_t i = 0; i < right.num_partitions(); ++i) {
      for (const auto& kv : right.partition(i)) index[kv.first].push_back(&kv.second);
    }
    return transform_partitions<U>([&](const std::vector<T>& in, std::vector<U>& out) {
      for (const T& kv : in) {
        auto it = index.find(kv.first);
        if (it == index.end()) continue;
        for (const V2* v : it->second) {
          out.emplace_back(kv.first, std::pair<V1, V2>(kv.second, *v));
        }
      }
    });
  }

  /// One element per distinct key, keys ascending; each value list keeps
  /// the dataset order of that key's values.
  auto group_by_key() const
    requires PairElement<T>
  {
    using K = typename T::first_type;
    using V = typename T::second_type;
    const std::size_t p = num_partitions();
    std::vector<std::map<K, std::vector<V>>> local(p);
    engine_->pool().parallel_for(p, [&](std::size_t i) {
      for (const T& kv : *partitions_[i]) local[i][kv.first].push_back(kv.second);
    });
    std::map<K, std::vector<V>> grouped;
    for (auto& m : local) {
      for (auto& [k, vs] : m) {
        auto& dst = grouped[k];
        dst.insert(dst.end(), std::make_move_iterator(vs.begin()),
                   std::make_move_iterator(vs.end()));
      }
    }
    std::vector<std::pair<K, std::vector<V>>> out;
    out.reserve(grouped.size());
    for (auto& [k, vs] : grouped) out.emplace_back(k, std::move(vs));
    return engine_->from_items(std::move(out), p);
  }

  /// Concatenation: this dataset's partitions followed by other's.
  PartitionedDataset union_with(const PartitionedDataset& other) const {
    std::vector<Partition> parts = partitions_;
    parts.insert(parts.end(), other.partitions_.begin(), other.partitions_.end());
    return PartitionedDataset(*engine_, std::move(parts));
  }

  /// Element counts of every partition, computed on the workers.
  std::vector<std::size_t> partition_counts() const {
    std::vector<std::size_t> counts(num_partitions());
    engine_->pool().parallel_for(num_partitions(), [&](std::size_t i) {
      counts[i] = partitions_[i]->size();
    });
    return counts;
  }

  /// Splits around the element at global position `index`. Partitions that
  /// lie wholly on one side are shared with the result; only the partition
  /// holding the element is cut.
  SplitResult<T> split_at(std::size_t index) const;

  std::vector<T> collect() const {
    std::vector<T> out;
    out.reserve(count());
    for (const auto& part : partitions_) out.insert(out.end(), part->begin(), part->end());
    return out;
  }

  std::size_t count() const noexcept {
    std::size_t n = 0;
    for (const auto& part : partitions_) n += part->size();
    return n;
  }

  bool is_empty() const noexcept { return count() == 0; }

  /// Throws std::out_of_range on an empty dataset.
  const T& first() const {
    for (const auto& part : partitions_) {
      if (!part->empty()) return part->front();
    }
    throw std::out_of_range("first() of an empty dataset");
  }

  const T& last() const {
    for (auto it = partitions_.rbegin(); it != partitions_.rend(); ++it) {
      if (!(*it)->empty()) return (*it)->back();
    }
    throw std::out_of_range("last() of an empty dataset");
  }

 private:
  template <class U, class Body>
  PartitionedDataset<U> transform_partitions(Body body) const {
    const std::size_t p = num_partitions();
    std::vector<typename PartitionedDataset<U>::Partition> out(p);
    engine_->pool().parallel_for(p, [&](std::size_t i) {
      auto part = std::make_shared<std::vector<U>>();
      body(*partitions_[i], *part);
      out[i] = std::move(part);
    });
    return PartitionedDataset<U>(*engine_, std::move(out));
  }

  Engine* engine_;
  std::vector<Partition> partitions_;
};

template <class T>
struct SplitResult {
  PartitionedDataset<T> less;
  T element;
  PartitionedDataset<T> greater;
};

template <class T>
SplitResult<T> PartitionedDataset<T>::split_at(std::size_t index) const {
  const std::vector<std::size_t> counts = partition_counts();
  const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (index >= total) {
    throw std::out_of_range("split_at index " + std::to_string(index) +
                            " out of range for " + std::to_string(total) +
                            " elements");
  }
  std::size_t owner = 0;
  std::size_t offset = index;
  while (offset >= counts[owner]) {
    offset -= counts[owner];
    ++owner;
  }

  const std::vector<T>& cut = *partitions_[owner];
  std::vector<Partition> less(partitions_.begin(), partitions_.begin() + owner);
  std::vector<Partition> greater;
  if (offset > 0) {
    less.push_back(std::make_shared<const std::vector<T>>(cut.begin(), cut.begin() + offset));
  }
  if (offset + 1 < cut.size()) {
    greater.push_back(
        std::make_shared<const std::vector<T>>(cut.begin() + offset + 1, cut.end()));
  }
  greater.insert(greater.end(), partitions_.begin() + owner + 1, partitions_.end());
  return {PartitionedDataset(*engine_, std::move(less)), cut[offset],
          PartitionedDataset(*engine_, std::move(greater))};
}

template <class T>
PartitionedDataset<T> Engine::from_items(std::vector<T> items,
                                         std::size_t num_partitions) {
  if (num_partitions < 1) throw std::invalid_argument("num_partitions must be >= 1");
  std::vector<typename PartitionedDataset<T>::Partition> parts;
  parts.reserve(num_partitions);
  const std::size_t base = items.size() / num_partitions;
  const std::size_t extra = items.size() % num_partitions;
  auto it = std::make_move_iterator(items.begin());
  for (std::size_t i = 0; i < num_partitions; ++i) {
    const std::size_t len = base + (i < extra ? 1 : 0);
    parts.push_back(std::make_shared<const std::vector<T>>(it, it + len));
    it += len;
  }
  return PartitionedDataset<T>(*this, std::move(parts));
}

}  // namespace kdmr
