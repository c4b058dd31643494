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

#include "kdmr/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace kdmr {
namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

template <class Int>
Int parse_int(std::string_view text, std::size_t line) {
  Int v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError(line, "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

// Reads the header line and every following non-empty line.
std::vector<std::pair<std::size_t, std::string>> csv_body(std::istream& in,
                                                          std::string_view header) {
  std::string line;
  if (!std::getline(in, line) || trim_cr(line) != header) {
    throw ParseError(1, "expected header '" + std::string(header) + "'");
  }
  std::vector<std::pair<std::size_t, std::string>> rows;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (trim_cr(line).empty()) continue;
    rows.emplace_back(number, std::string(trim_cr(line)));
  }
  return rows;
}

ordered_json region_json(const Region& r) {
  return ordered_json::array({r.x_min, r.y_min, r.x_max, r.y_max});
}

std::array<double, 4> quad(const nlohmann::json& j, std::size_t line) {
  if (!j.is_array() || j.size() != 4) throw ParseError(line, "expected a 4-element array");
  std::array<double, 4> out{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!j[i].is_number()) throw ParseError(line, "expected a number");
    out[i] = j[i].get<double>();
  }
  return out;
}

std::optional<ChildLink> link_from(const nlohmann::json& j, std::size_t line) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_object() || !j.contains("name") || !j.contains("region")) {
    throw ParseError(line, "child must be null or {\"name\":..,\"region\":[..]}");
  }
  const auto r = quad(j["region"], line);
  return ChildLink{j["name"].get<Name>(), Region{r[0], r[1], r[2], r[3]}};
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double parse_double(std::string_view text, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty() ||
      !std::isfinite(v)) {
    throw ParseError(line, "expected a finite number, got '" + std::string(text) + "'");
  }
  return v;
}

void write_boxes_csv(std::ostream& out, const std::vector<Box>& boxes) {
  out << "name,xmin,ymin,xmax,ymax\n";
  for (const Box& b : boxes) {
    out << b.name << ',' << format_double(b.x_min) << ',' << format_double(b.y_min) << ','
        << format_double(b.x_max) << ',' << format_double(b.y_max) << '\n';
  }
}

std::vector<Box> read_boxes_csv(std::istream& in) {
  std::vector<Box> boxes;
  std::unordered_set<Name> names;
  for (const auto& [line, text] : csv_body(in, "name,xmin,ymin,xmax,ymax")) {
    const auto fields = split(text, ',');
    if (fields.size() != 5) throw ParseError(line, "expected 5 fields");
    Box b{parse_int<Name>(fields[0], line), parse_double(fields[1], line),
          parse_double(fields[2], line), parse_double(fields[3], line),
          parse_double(fields[4], line)};
    try {
      validate(b);
    } catch (const std::invalid_argument& e) {
      throw ParseError(line, e.what());
    }
    if (!names.insert(b.name).second) {
      throw ParseError(line, "duplicate box name " + std::to_string(b.name));
    }
    boxes.push_back(b);
  }
  return boxes;
}

void write_tree_jsonl(std::ostream& out, std::vector<TreeGraphEntry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [name, record] : entries) {
    ordered_json j;
    j["name"] = name;
    j["box"] = ordered_json::array(
        {record.box.x_min, record.box.y_min, record.box.x_max, record.box.y_max});
    for (const auto& [key, link] : {std::pair{"lt", record.lt}, std::pair{"gt", record.gt}}) {
      if (link) {
        j[key] = ordered_json{{"name", link->name}, {"region", region_json(link->region)}};
      } else {
        j[key] = nullptr;
      }
    }
    out << j.dump() << '\n';
  }
}

std::vector<TreeGraphEntry> read_tree_jsonl(std::istream& in) {
  std::vector<TreeGraphEntry> entries;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (trim_cr(text).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line, e.what());
    }
    if (!j.is_object() || !j.contains("name") || !j.contains("box") || !j.contains("lt") ||
        !j.contains("gt") || !j["name"].is_number_unsigned()) {
      throw ParseError(line, "expected name, box, lt and gt fields");
    }
    const auto b = quad(j["box"], line);
    NodeRecord record{Box{j["name"].get<Name>(), b[0], b[1], b[2], b[3]},
                      link_from(j["lt"], line), link_from(j["gt"], line)};
    try {
      validate(record.box);
    } catch (const std::invalid_argument& e) {
      throw ParseError(line, e.what());
    }
    entries.emplace_back(record.box.name, std::move(record));
  }
  return entries;
}

void write_results_csv(std::ostream& out, const MatchMap& results) {
  out << "query,matches\n";
  for (const auto& [query, matches] : results) {
    if (matches.empty()) continue;
    out << query << ',';
    for (std::size_t i = 0; i < matches.size(); ++i) {
      if (i > 0) out << ';';
      out << matches[i];
    }
    out << '\n';
  }
}

MatchMap read_results_csv(std::istream& in) {
  MatchMap results;
  for (const auto& [line, text] : csv_body(in, "query,matches")) {
    const auto fields = split(text, ',');
    if (fields.size() != 2) throw ParseError(line, "expected 2 fields");
    std::vector<Name> matches;
    for (auto m : split(fields[1], ';')) matches.push_back(parse_int<Name>(m, line));
    if (!results.emplace(parse_int<Name>(fields[0], line), std::move(matches)).second) {
      throw ParseError(line, "duplicate query");
    }
  }
  return results;
}

std::string_view to_string(Phase p) noexcept {
  return p == Phase::Build ? "build" : "search";
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << "phase,n,workers,repeat,seconds\n";
  for (const auto& r : records) {
    out << to_string(r.phase) << ',' << r.n << ',' << r.workers << ',' << r.repeat << ','
        << format_double(r.seconds) << '\n';
  }
}

std::vector<BenchRecord> read_bench_csv(std::istream& in) {
  std::vector<BenchRecord> records;
  for (const auto& [line, text] : csv_body(in, "phase,n,workers,repeat,seconds")) {
    const auto f = split(text, ',');
    if (f.size() != 5) throw ParseError(line, "expected 5 fields");
    BenchRecord r;
    if (f[0] == "build") {
      r.phase = Phase::Build;
    } else if (f[0] == "search") {
      r.phase = Phase::Search;
    } else {
      throw ParseError(line, "phase must be build or search");
    }
    r.n = parse_int<std::size_t>(f[1], line);
    r.workers = parse_int<std::size_t>(f[2], line);
    r.repeat = parse_int<std::size_t>(f[3], line);
    r.seconds = parse_double(f[4], line);
    if (r.seconds < 0.0) throw ParseError(line, "negative elapsed time");
    records.push_back(r);
  }
  return records;
}

void write_fit_report(std::ostream& out, const FitResult& fit) {
  out << "model,param,value\n";
  for (const auto& [name, value] : fit.params) {
    out << fit.model << ',' << name << ',' << format_double(value) << '\n';
  }
  out << "r," << format_double(fit.r) << '\n';
}

}  // namespace kdmr
