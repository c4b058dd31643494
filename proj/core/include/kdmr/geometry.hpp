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

// Value types shared by every part of the library: named bounding boxes,
// bounding regions and the coordinate:name super keys used to sort them.

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>

namespace kdmr {

using Name = std::uint64_t;

/// Thrown when a collection handed to a build or search repeats a box name.
class DuplicateNameError : public std::invalid_argument {
 public:
  explicit DuplicateNameError(Name name)
      : std::invalid_argument("duplicate box name " + std::to_string(name)),
        name_(name) {}

  Name name() const noexcept { return name_; }

 private:
  Name name_;
};

/// A named axis-aligned rectangle. This is both the unit stored in a tree
/// and the unit used as a query.
struct Box {
  Name name = 0;
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  friend bool operator==(const Box&, const Box&) = default;
};

/// The rectangle that just encloses a node's box and everything below it.
struct Region {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  static Region of(const Box& b) noexcept {
    return {b.x_min, b.y_min, b.x_max, b.y_max};
  }

  bool contains(const Region& other) const noexcept {
    return x_min <= other.x_min && y_min <= other.y_min &&
           x_max >= other.x_max && y_max >= other.y_max;
  }
  bool contains(const Box& b) const noexcept { return contains(of(b)); }

  friend bool operator==(const Region&, const Region&) = default;
};

/// Box coordinate that a super key is formed from. The tree splits on
/// XMin and YMin; XMax and YMax only order the extra sorted datasets the
/// distributed build keeps for its bounding regions.
enum class Axis : std::uint8_t { XMin, YMin, XMax, YMax };

/// Split axis for a tree level: x_min at even depth, y_min at odd depth.
constexpr Axis split_axis(std::size_t depth) noexcept {
  return depth % 2 == 0 ? Axis::XMin : Axis::YMin;
}

constexpr Axis other_split_axis(Axis a) noexcept {
  return a == Axis::XMin ? Axis::YMin : Axis::XMin;
}

double coordinate(const Box& b, Axis axis) noexcept;

/// Catenation coordinate:name. Lexicographic comparison gives a strict total
/// order over any set of boxes with unique names.
struct SuperKey {
  double coordinate = 0.0;
  Name name = 0;

  friend bool operator==(const SuperKey&, const SuperKey&) = default;
  friend std::strong_ordering operator<=>(const SuperKey& a,
                                          const SuperKey& b) noexcept;
};

SuperKey super_key(const Box& b, Axis axis) noexcept;

/// Never returns equal for keys of distinct boxes.
std::strong_ordering compare_superkey(const SuperKey& a,
                                      const SuperKey& b) noexcept;

/// Closed-interval overlap on both axes; touching edges intersect.
bool boxes_intersect(const Box& a, const Box& b) noexcept;

bool intersects_region(const Box& b, const Region& r) noexcept;

/// Smallest region enclosing the node box and each child region.
Region merge_region(const Box& node_box,
                    std::span<const Region> children) noexcept;
Region merge_region(const Box& node_box,
                    std::initializer_list<Region> children) noexcept;

/// Throws std::invalid_argument for non-finite or inverted coordinates.
void validate(const Box& b);

/// Throws DuplicateNameError on the first repeated name.
void require_unique_names(std::span<const Box> boxes);

}  // namespace kdmr

template <>
struct std::hash<kdmr::SuperKey> {
  std::size_t operator()(const kdmr::SuperKey& k) const noexcept {
    std::size_t h = std::hash<double>{}(k.coordinate);
    return h ^ (std::hash<kdmr::Name>{}(k.name) + 0x9e3779b97f4a7c15ULL +
                (h << 6) + (h >> 2));
  }
};
