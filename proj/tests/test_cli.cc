// Copyright 2026 The censorloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sstream>

#include "censorloc/cli.h"
#include "censorloc/solver.h"
#include "doctest.h"
#include "json.hpp"
#include "test_util.h"

using namespace censorloc;
using namespace censorloc::testing;
using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

// A small simulated dataset in dir/data.
void simulate_into(const TempDir& dir, std::vector<std::string> extra = {}) {
  std::vector<std::string> args = {"simulate", "--out", dir.str("data"), "--seed", "4",
                                   "--ases", "30", "--vantages", "4", "--urls", "6",
                                   "--days", "4", "--rounds", "3"};
  args.insert(args.end(), extra.begin(), extra.end());
  REQUIRE(run(args).code == kExitOk);
}

std::vector<std::string> inputs(const TempDir& dir, const std::string& out) {
  return {"--measurements", dir.str("data/measurements.jsonl"), "--pfx2as",
          dir.str("data/pfx2as.tsv"), "--out", dir.str(out)};
}

std::vector<std::string> cmd(std::string name, std::vector<std::string> rest) {
  rest.insert(rest.begin(), std::move(name));
  return rest;
}

}  // namespace

TEST_CASE("solve-dimacs prints the solution summary") {
  TempDir dir("cli-solve");
  spit(dir.str("unsat.cnf"), "p cnf 1 2\n1 0\n-1 0\n");
  Run r = run({"solve-dimacs", dir.str("unsat.cnf")});
  CHECK(r.code == kExitOk);
  CHECK(json::parse(r.out)["status"] == "unsat");

  spit(dir.str("multi.cnf"), "c demo\np cnf 3 2\n1 2 3 0\n-3 0\n");
  r = run({"solve-dimacs", dir.str("multi.cnf")});
  const json j = json::parse(r.out);
  CHECK(j["status"] == "multiple");
  CHECK(j["count_capped"] == 3);
  CHECK(j["backbone"]["3"] == "forced_false");

  spit(dir.str("bad.cnf"), "p cnf 2 1\n1 5 0\n");
  r = run({"solve-dimacs", dir.str("bad.cnf")});
  CHECK(r.code == kExitInput);
}

TEST_CASE("input errors exit with code 2 and name the file") {
  TempDir dir("cli-errors");
  simulate_into(dir);
  Run r = run({"localize", "--measurements", dir.str("data/measurements.jsonl"), "--pfx2as",
               dir.str("missing.tsv"), "--out", dir.str("out")});
  CHECK(r.code == kExitInput);
  CHECK(r.err.find("missing.tsv") != std::string::npos);

  spit(dir.str("empty.jsonl"), "");
  r = run({"localize", "--measurements", dir.str("empty.jsonl"), "--pfx2as",
           dir.str("data/pfx2as.tsv"), "--out", dir.str("out")});
  CHECK(r.code == kExitInput);

  r = run(cmd("localize", inputs(dir, "out")));
  CHECK(r.code == kExitOk);
  r = run(cmd("localize", inputs(dir, "out")));
  CHECK(r.code == kExitInput);
  auto forced = inputs(dir, "out");
  forced.push_back("--force");
  CHECK(run(cmd("localize", forced)).code == kExitOk);

  auto bad_gran = inputs(dir, "out2");
  bad_gran.insert(bad_gran.end(), {"--granularity", "fortnight"});
  CHECK(run(cmd("localize", bad_gran)).code == kExitInput);

  CHECK(run({"localize", "--bogus"}).code == kExitInput);
  CHECK(run({}).code == kExitInput);
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run(cmd("leak", inputs(dir, "out3"))).code == kExitInput);  // needs --as-meta
}

TEST_CASE("records that all fail inference give an empty result") {
  TempDir dir("cli-noobs");
  simulate_into(dir);
  // No prefix covers the simulated address space.
  spit(dir.str("other.tsv"), "250.0.0.0\t8\t64512\n");
  const Run r = run({"localize", "--measurements", dir.str("data/measurements.jsonl"),
                     "--pfx2as", dir.str("other.tsv"), "--out", dir.str("out")});
  CHECK(r.code == kExitOk);
  CHECK_FALSE(r.err.empty());
  CHECK(json::parse(slurp(dir.str("out/censors.json"))).empty());
}

TEST_CASE("localize writes the output tree") {
  TempDir dir("cli-localize");
  simulate_into(dir);
  auto args = inputs(dir, "out");
  args.push_back("--debug-trace");
  REQUIRE(run(cmd("localize", args)).code == kExitOk);
  const auto tree = read_tree(dir.str("out"));
  for (const char* f : {"ingest_summary.json", "elimination_summary.json", "censors.json",
                        "reduction_cdf.csv", "reduction_stats.csv", "reduction_summary.json",
                        "solutions_by_granularity.csv", "solutions_by_anomaly.csv",
                        "cnf_solutions.csv", "solvability.json", "path_inference_trace.jsonl"}) {
    CHECK_MESSAGE(tree.contains(f), f);
  }
  const json ingest = json::parse(tree.at("ingest_summary.json"));
  CHECK(ingest["measurements"]["records_ok"] == 4 * 3 * 4 * 6 * 5);
  CHECK(tree.at("reduction_cdf.csv").rfind("fraction,cumulative_share\n", 0) == 0);

  const Run eval = run({"evaluate", "--censors-file", dir.str("out/censors.json"), "--truth",
                        dir.str("data/ground_truth.json")});
  CHECK(eval.code == kExitOk);
  CHECK(json::parse(eval.out)["overall"]["precision"] == 1.0);
}

TEST_CASE("exported DIMACS files solve to the pipeline status") {
  TempDir dir("cli-dimacs");
  simulate_into(dir);
  auto args = inputs(dir, "cnf");
  args.insert(args.end(), {"--granularity", "day"});
  REQUIRE(run(cmd("export-dimacs", args)).code == kExitOk);
  std::istringstream rows(slurp(dir.str("cnf/cnf_solutions.csv")));
  std::string line;
  std::getline(rows, line);
  int checked = 0;
  while (std::getline(rows, line)) {
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    REQUIRE(cols.size() == 9);
    const Run r = run({"solve-dimacs", dir.str("cnf/" + cols[8])});
    REQUIRE(r.code == kExitOk);
    const json j = json::parse(r.out);
    CHECK(j["status"] == cols[4]);
    CHECK(j["count_capped"].get<int>() == std::stoi(cols[5]));
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("simulate is reproducible") {
  TempDir a("cli-sim-a"), b("cli-sim-b");
  simulate_into(a);
  simulate_into(b);
  CHECK(read_tree(a.str("data")) == read_tree(b.str("data")));
}

TEST_CASE("ablation without churn matches the baseline") {
  TempDir dir("cli-ablate");
  simulate_into(dir, {"--churn", "0"});
  REQUIRE(run(cmd("ablate", inputs(dir, "out"))).code == kExitOk);
  const auto tree = read_tree(dir.str("out"));
  CHECK(tree.at("ablated_cnf_solutions.csv") == tree.at("cnf_solutions.csv"));
  CHECK(tree.at("ablated_solutions_by_granularity.csv") ==
        tree.at("solutions_by_granularity.csv"));
  const json s = json::parse(tree.at("ablation_summary.json"));
  CHECK(s["observations"] == s["ablated_observations"]);
  CHECK(s["baseline"] == s["ablated"]);
}

TEST_CASE("churn writes per-cell and summary tables") {
  TempDir dir("cli-churn");
  simulate_into(dir);
  REQUIRE(run(cmd("churn", inputs(dir, "out"))).code == kExitOk);
  const std::string summary = slurp(dir.str("out/churn_summary.csv"));
  CHECK(summary.rfind("granularity,cells,eligible_cells", 0) == 0);
  CHECK(slurp(dir.str("out/churn.csv")).rfind("pair,granularity,window,distinct_paths\n", 0) == 0);
}

TEST_CASE("leak reports cross-country edges only across borders") {
  TempDir dir("cli-leak");
  simulate_into(dir);
  auto args = inputs(dir, "out");
  args.insert(args.end(), {"--as-meta", dir.str("data/as_meta.csv")});
  REQUIRE(run(cmd("leak", args)).code == kExitOk);
  const json leak = json::parse(slurp(dir.str("out/leakage.json")));
  REQUIRE_FALSE(leak["edges"].empty());
  std::size_t country = 0;
  for (const auto& c : leak["censors"]) country += c["leaks_country"].get<std::size_t>();
  CHECK(country > 0);

  // Same world, every AS in one country.
  std::istringstream meta(slurp(dir.str("data/as_meta.csv")));
  std::string line, flat;
  std::getline(meta, line);
  flat = line + "\n";
  while (std::getline(meta, line)) {
    const auto a = line.find(','), b = line.find(',', a + 1);
    flat += line.substr(0, a) + ",US" + line.substr(b) + "\n";
  }
  spit(dir.str("flat.csv"), flat);
  args = inputs(dir, "flat");
  args.insert(args.end(), {"--as-meta", dir.str("flat.csv")});
  REQUIRE(run(cmd("leak", args)).code == kExitOk);
  const json flat_leak = json::parse(slurp(dir.str("flat/leakage.json")));
  CHECK(flat_leak["edges"].size() == leak["edges"].size());
  for (const auto& c : flat_leak["censors"]) CHECK(c["leaks_country"] == 0);
}
