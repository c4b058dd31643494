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

// Text formats read and written by the command-line tool.
//
//   boxes    CSV  name,xmin,ymin,xmax,ymax
//   tree     one JSON object per line, sorted by name:
//            {"name":N,"box":[xmin,ymin,xmax,ymax],
//             "lt":{"name":N,"region":[...]}|null,"gt":{...}|null}
//   results  CSV  query,matches   (matches joined by ';', ascending)
//   bench    CSV  phase,n,workers,repeat,seconds
//   fit      model,param,value lines followed by r,<value>
//
// Real numbers are written in the shortest form that parses back to the
// same double.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kdmr/distributed_tree.hpp"
#include "kdmr/fit.hpp"
#include "kdmr/geometry.hpp"
#include "kdmr/test_data.hpp"

namespace kdmr {

/// Malformed input. `line` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

std::string format_double(double v);
double parse_double(std::string_view text, std::size_t line = 0);

void write_boxes_csv(std::ostream& out, const std::vector<Box>& boxes);
/// Validates every box and rejects duplicate names.
std::vector<Box> read_boxes_csv(std::istream& in);

void write_tree_jsonl(std::ostream& out, std::vector<TreeGraphEntry> entries);
std::vector<TreeGraphEntry> read_tree_jsonl(std::istream& in);

void write_results_csv(std::ostream& out, const MatchMap& results);
MatchMap read_results_csv(std::istream& in);

enum class Phase { Build, Search };
std::string_view to_string(Phase p) noexcept;

struct BenchRecord {
  Phase phase = Phase::Build;
  std::size_t n = 0;
  std::size_t workers = 1;
  std::size_t repeat = 0;
  double seconds = 0.0;

  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records);
std::vector<BenchRecord> read_bench_csv(std::istream& in);

void write_fit_report(std::ostream& out, const FitResult& fit);

}  // namespace kdmr
