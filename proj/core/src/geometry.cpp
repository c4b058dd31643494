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

#include "kdmr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace kdmr {

double coordinate(const Box& b, Axis axis) noexcept {
  switch (axis) {
    case Axis::XMin:
      return b.x_min;
    case Axis::YMin:
      return b.y_min;
    case Axis::XMax:
      return b.x_max;
    case Axis::YMax:
      return b.y_max;
  }
  return b.x_min;
}

std::strong_ordering operator<=>(const SuperKey& a, const SuperKey& b) noexcept {
  // Coordinates are finite, so the partial order on doubles is total here.
  if (a.coordinate < b.coordinate) return std::strong_ordering::less;
  if (a.coordinate > b.coordinate) return std::strong_ordering::greater;
  return a.name <=> b.name;
}

SuperKey super_key(const Box& b, Axis axis) noexcept {
  return {coordinate(b, axis), b.name};
}

std::strong_ordering compare_superkey(const SuperKey& a,
                                      const SuperKey& b) noexcept {
  return a <=> b;
}

bool boxes_intersect(const Box& a, const Box& b) noexcept {
  return a.x_min <= b.x_max && b.x_min <= a.x_max && a.y_min <= b.y_max &&
         b.y_min <= a.y_max;
}

bool intersects_region(const Box& b, const Region& r) noexcept {
  return b.x_min <= r.x_max && r.x_min <= b.x_max && b.y_min <= r.y_max &&
         r.y_min <= b.y_max;
}

Region merge_region(const Box& node_box,
                    std::span<const Region> children) noexcept {
  Region out = Region::of(node_box);
  for (const Region& c : children) {
    out.x_min = std::min(out.x_min, c.x_min);
    out.y_min = std::min(out.y_min, c.y_min);
    out.x_max = std::max(out.x_max, c.x_max);
    out.y_max = std::max(out.y_max, c.y_max);
  }
  return out;
}

Region merge_region(const Box& node_box,
                    std::initializer_list<Region> children) noexcept {
  return merge_region(node_box,
                      std::span<const Region>(children.begin(), children.size()));
}

void validate(const Box& b) {
  if (!std::isfinite(b.x_min) || !std::isfinite(b.y_min) ||
      !std::isfinite(b.x_max) || !std::isfinite(b.y_max)) {
    throw std::invalid_argument("box " + std::to_string(b.name) +
                                " has a non-finite coordinate");
  }
  if (b.x_min > b.x_max || b.y_min > b.y_max) {
    throw std::invalid_argument("box " + std::to_string(b.name) +
                                " has min > max");
  }
}

void require_unique_names(std::span<const Box> boxes) {
  std::unordered_set<Name> seen;
  seen.reserve(boxes.size());
  for (const Box& b : boxes) {
    if (!seen.insert(b.name).second) throw DuplicateNameError(b.name);
  }
}

}  // namespace kdmr
