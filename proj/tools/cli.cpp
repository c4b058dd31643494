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

#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include "kdmr/bench.hpp"
#include "kdmr/distributed_search.hpp"
#include "kdmr/distributed_tree.hpp"
#include "kdmr/io.hpp"
#include "kdmr/test_data.hpp"

namespace kdmr::cli {
namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  return in;
}

template <class Writer>
void write_file(const std::string& path, Writer&& write) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write(out);
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path);
}

MatchMap to_match_map(const MatchDataset& matches) {
  MatchMap out;
  for (auto& [query, names] : matches.collect()) out.emplace(query, std::move(names));
  return out;
}

struct GenArgs {
  std::size_t squares = 1;
  double side = 100.0;
  std::string out;
};

struct BuildArgs {
  std::string in;
  std::string out;
  std::size_t workers = 1;
  std::size_t partitions = 8;
  std::optional<std::size_t> cutoff;
  bool auto_cutoff = false;
};

struct SearchArgs {
  std::string tree;
  std::string queries;
  std::string out;
  std::size_t workers = 1;
  std::size_t partitions = 8;
  bool verify = false;
  std::optional<std::size_t> squares;
};

struct FitArgs {
  std::string in;
  std::string phase;
};

int do_gen(const GenArgs& a, std::ostream& out) {
  const auto boxes = generate_test_data({a.squares, a.side});
  write_file(a.out, [&](std::ostream& f) { write_boxes_csv(f, boxes); });
  out << "wrote " << boxes.size() << " boxes to " << a.out << '\n';
  return kExitOk;
}

int do_build(const BuildArgs& a, std::ostream& out) {
  auto in = open_in(a.in);
  const auto boxes = read_boxes_csv(in);
  Engine engine({a.workers, a.partitions});
  std::size_t cutoff = kNoCutoff;
  if (a.cutoff) {
    cutoff = *a.cutoff;
  } else if (!boxes.empty()) {
    const CutoffParams params = measure_cutoff_params(engine, boxes);
    cutoff = cutoff_depth(params);
    out << "c_dataset=" << format_double(params.c_dataset)
        << " c_array=" << format_double(params.c_array) << " cutoff_depth=" << cutoff << '\n';
  }
  const DistributedTree tree = build_distributed_tree(engine, boxes, cutoff);
  const auto entries = tree.entries.collect();
  write_file(a.out, [&](std::ostream& f) { write_tree_jsonl(f, entries); });
  out << "wrote " << entries.size() << " nodes (depth "
      << tree_graph_depth(entries, tree.root) << ") to " << a.out << '\n';
  return kExitOk;
}

int do_search(const SearchArgs& a, std::ostream& out, std::ostream& err) {
  auto tree_in = open_in(a.tree);
  auto entries = read_tree_jsonl(tree_in);
  auto query_in = open_in(a.queries);
  const auto queries = read_boxes_csv(query_in);

  Engine engine({a.workers, a.partitions});
  const TreeDataset tree = engine.from_items(std::move(entries));
  const SearchResult result = run_search(make_search_dataset(engine, queries), tree);
  const MatchMap matches = to_match_map(result.matches);
  write_file(a.out, [&](std::ostream& f) { write_results_csv(f, matches); });
  out << "wrote " << matches.size() << " queries with matches to " << a.out << " after "
      << result.iterations << " iterations\n";

  if (a.verify) {
    if (!verify(matches, *a.squares)) {
      err << "verification FAILED: expected " << kIntersectingPerSquare * *a.squares
          << " intersecting rectangles matching the brute-force search, got "
          << matches.size() << '\n';
      return kExitVerifyFailed;
    }
    out << "verification passed: " << matches.size() << " intersecting rectangles\n";
  }
  return kExitOk;
}

int do_bench(const BenchOptions& o, const std::string& path, std::ostream& out,
             std::ostream& err) {
  const BenchReport report = run_bench(o);
  write_file(path, [&](std::ostream& f) { write_bench_csv(f, report.records); });
  for (const auto& fit : report.fits) {
    write_fit_report(out, fit);
    if (fit.warning) err << "warning: " << fit.model << ": " << *fit.warning << '\n';
  }
  return kExitOk;
}

int do_fit(bool scaling, const FitArgs& a, std::ostream& out, std::ostream& err) {
  auto in = open_in(a.in);
  const auto records = read_bench_csv(in);
  std::set<Phase> phases;
  for (const auto& r : records) phases.insert(r.phase);
  Phase phase = phases.size() == 1 ? *phases.begin() : Phase::Build;
  if (a.phase == "search") phase = Phase::Search;
  if (a.phase == "build") phase = Phase::Build;

  const auto points = min_over_repeats(records, phase, scaling);
  FitResult fit = scaling ? fit_scaling_model(points) : fit_linear_nlogn(points);
  write_fit_report(out, fit);
  if (fit.warning) err << "warning: " << *fit.warning << '\n';
  return kExitOk;
}

void add_cutoff_options(CLI::App* cmd, std::optional<std::size_t>& cutoff, bool& auto_cutoff) {
  auto* depth = cmd->add_option("--cutoff-depth", cutoff,
                                "Depth at which datasets are collected and subtrees are "
                                "built in memory");
  auto* automatic = cmd->add_flag("--auto-cutoff", auto_cutoff,
                                  "Measure cost constants and pick the cutoff depth");
  depth->excludes(automatic);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Balanced k-d tree build and search over a MapReduce-style dataset engine",
               "kdmr"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate square-grid test rectangles");
  gen_cmd->add_option("--squares", gen.squares, "Number of squares")->required()
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--side", gen.side, "Square side length")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--out", gen.out, "Output box CSV")->required();

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build", "Build the tree dataset from a box CSV");
  build_cmd->add_option("--in", build.in, "Input box CSV")->required();
  build_cmd->add_option("--workers", build.workers)->required()->check(CLI::PositiveNumber);
  build_cmd->add_option("--partitions", build.partitions)->check(CLI::PositiveNumber);
  add_cutoff_options(build_cmd, build.cutoff, build.auto_cutoff);
  build_cmd->add_option("--out", build.out, "Output tree file (JSON lines)")->required();

  SearchArgs search;
  auto* search_cmd = app.add_subcommand("search", "Search a tree with query boxes");
  search_cmd->add_option("--tree", search.tree)->required();
  search_cmd->add_option("--queries", search.queries)->required();
  search_cmd->add_option("--workers", search.workers)->required()->check(CLI::PositiveNumber);
  search_cmd->add_option("--partitions", search.partitions)->check(CLI::PositiveNumber);
  search_cmd->add_option("--out", search.out, "Output results CSV")->required();
  auto* verify_flag =
      search_cmd->add_flag("--verify", search.verify, "Check against the expected result");
  auto* squares_opt = search_cmd->add_option("--squares", search.squares,
                                             "Squares the queries were generated with");
  verify_flag->needs(squares_opt);

  BenchOptions bench;
  std::string bench_out;
  auto* bench_cmd = app.add_subcommand("bench", "Timing sweeps");
  bench_cmd->require_subcommand(1);
  for (const char* name : {"build", "search"}) {
    auto* sub = bench_cmd->add_subcommand(name, std::string("Time the distributed ") + name +
                                                    " for n = 2^A..2^B");
    sub->add_option("--min-exp", bench.min_exp)->required();
    sub->add_option("--max-exp", bench.max_exp)->required();
    sub->add_option("--workers", bench.workers)->required()->check(CLI::PositiveNumber);
    sub->add_option("--repeats", bench.repeats)->required()->check(CLI::PositiveNumber);
    sub->add_option("--partitions", bench.partitions)->check(CLI::PositiveNumber);
    add_cutoff_options(sub, bench.cutoff, bench.auto_cutoff);
    sub->add_option("--out", bench_out)->required();
  }
  auto* scaling_cmd =
      bench_cmd->add_subcommand("scaling", "Time build and search for 1..W workers");
  scaling_cmd->add_option("--exp", bench.exp)->required();
  scaling_cmd->add_option("--max-workers", bench.max_workers)->required()
      ->check(CLI::PositiveNumber);
  scaling_cmd->add_option("--repeats", bench.repeats)->required()->check(CLI::PositiveNumber);
  scaling_cmd->add_option("--partitions", bench.partitions)->check(CLI::PositiveNumber);
  add_cutoff_options(scaling_cmd, bench.cutoff, bench.auto_cutoff);
  scaling_cmd->add_option("--out", bench_out)->required();

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a bench CSV");
  fit_cmd->require_subcommand(1);
  for (const char* name : {"nlogn", "scaling"}) {
    auto* sub = fit_cmd->add_subcommand(name, std::string("Fit the ") + name + " model");
    sub->add_option("--in", fit.in, "Bench CSV")->required();
    sub->add_option("--phase", fit.phase, "build or search")
        ->check(CLI::IsMember({"build", "search"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (*gen_cmd) return do_gen(gen, out);
    if (*build_cmd) return do_build(build, out);
    if (*search_cmd) return do_search(search, out, err);
    if (*bench_cmd) {
      for (auto* sub : bench_cmd->get_subcommands()) {
        if (sub->get_name() == "build") bench.kind = BenchKind::Build;
        if (sub->get_name() == "search") bench.kind = BenchKind::Search;
        if (sub->get_name() == "scaling") bench.kind = BenchKind::Scaling;
      }
      return do_bench(bench, bench_out, out, err);
    }
    if (*fit_cmd) {
      const bool scaling = fit_cmd->get_subcommands().front()->get_name() == "scaling";
      return do_fit(scaling, fit, out, err);
    }
  } catch (const std::exception& e) {
    // Bad files, invalid boxes, malformed trees, impossible fits.
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
  return kExitBadInput;
}

}  // namespace kdmr::cli
