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

#include "censorloc/cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "censorloc/analysis.h"
#include "censorloc/cnf.h"
#include "censorloc/ingest.h"
#include "censorloc/pipeline.h"
#include "censorloc/report.h"
#include "censorloc/simulate.h"
#include "censorloc/solver.h"
#include "censorloc/tomography.h"
#include "json.hpp"

namespace censorloc {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct GlobalFlags {
  std::string pfx2as;
  std::string as_meta;
  std::string measurements;
  std::string out;
  std::vector<std::string> granularities;
  std::vector<std::string> anomalies;
  int model_cap = kDefaultModelCap;
  unsigned workers = 1;
  std::uint64_t seed = 1;
  bool force = false;
  bool no_url_split = false;
  bool debug_trace = false;
  std::string from;
  std::string until;
};

std::string read_file(const std::string& path, const char* what) {
  if (path.empty()) throw InputError(std::string("missing required --") + what);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + std::string(what) + " file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Collects the output files of one command; nothing touches the disk until
// commit().
class OutputTree {
 public:
  OutputTree(std::string dir, bool force) : dir_(std::move(dir)), force_(force) {}

  void add(const std::string& name, std::string content) {
    files_.emplace_back(name, std::move(content));
  }

  void commit() const {
    if (dir_.empty()) throw InputError("missing required --out");
    const fs::path dir(dir_);
    std::error_code ec;
    if (fs::exists(dir, ec)) {
      if (!fs::is_directory(dir, ec))
        throw InputError("output path is not a directory: " + dir_);
      if (!fs::is_empty(dir, ec) && !force_)
        throw InputError("output directory not empty (use --force): " + dir_);
    } else if (!fs::create_directories(dir, ec) || ec) {
      throw InputError("cannot create output directory: " + dir_);
    }
    for (const auto& [name, content] : files_) {
      std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
      f << content;
      if (!f) throw std::runtime_error("write failed: " + (dir / name).string());
    }
  }

 private:
  std::string dir_;
  bool force_;
  std::vector<std::pair<std::string, std::string>> files_;
};

std::optional<Timestamp> parse_period_bound(const std::string& text, const char* flag) {
  if (text.empty()) return std::nullopt;
  auto t = parse_timestamp(text);
  if (!t) throw InputError(std::string("invalid ") + flag + " timestamp: " + text);
  return t;
}

PipelineOptions pipeline_options(const GlobalFlags& g) {
  PipelineOptions o;
  if (!g.granularities.empty()) {
    o.granularities.clear();
    for (const auto& token : g.granularities) {
      auto gran = parse_granularity(token);
      if (!gran) throw InputError("unknown granularity: " + token);
      if (std::find(o.granularities.begin(), o.granularities.end(), *gran) ==
          o.granularities.end())
        o.granularities.push_back(*gran);
    }
    std::sort(o.granularities.begin(), o.granularities.end());
  }
  for (const auto& token : g.anomalies) {
    auto a = parse_anomaly(token);
    if (!a) throw InputError("unknown anomaly type: " + token);
    o.anomalies.push_back(*a);
  }
  if (g.model_cap < 1) throw InputError("--model-cap must be at least 1");
  o.model_cap = g.model_cap;
  o.url_split = !g.no_url_split;
  o.workers = std::max(1u, g.workers);
  o.debug_trace = g.debug_trace;
  return o;
}

struct LoadedInputs {
  std::vector<MeasurementRecord> records;
  PrefixTable table;
  std::optional<AsRegistry> registry;
  json ingest_summary;
};

LoadedInputs load_inputs(const GlobalFlags& g, bool need_registry) {
  LoadedInputs in;
  IngestReport pfx_report;
  {
    std::istringstream s(read_file(g.pfx2as, "pfx2as"));
    in.table = parse_pfx2as(s, &pfx_report);
  }
  if (need_registry || !g.as_meta.empty()) {
    IngestReport meta_report;
    std::istringstream s(read_file(g.as_meta, "as-meta"));
    in.registry = parse_as_metadata(s, &meta_report);
    in.ingest_summary["as_meta"] = meta_report.summary_json();
    in.ingest_summary["as_meta"]["warnings"] = meta_report.warnings;
  }
  IngestReport rec_report;
  AnalysisPeriod period{parse_period_bound(g.from, "--from"),
                        parse_period_bound(g.until, "--until")};
  std::istringstream s(read_file(g.measurements, "measurements"));
  in.records = parse_measurements(s, &rec_report, period);
  in.ingest_summary["measurements"] = rec_report.summary_json();
  in.ingest_summary["pfx2as"] = pfx_report.summary_json();
  return in;
}

void add_localize_outputs(OutputTree& tree, const LoadedInputs& in,
                          const LocalizeResult& result, const PipelineOptions& options,
                          std::ostream& err) {
  const auto summaries = summaries_of(result.solved);
  if (result.observations.empty())
    err << "warning: no records survived path inference; no CNFs were built\n";
  tree.add("ingest_summary.json", json_text(in.ingest_summary));
  tree.add("elimination_summary.json", json_text(result.elimination.to_json()));
  tree.add("censors.json", json_text(censors_json(result.verdicts)));
  tree.add("reduction_cdf.csv", reduction_cdf_csv(result.reduction));
  tree.add("reduction_stats.csv", reduction_stats_csv(result.reduction));
  tree.add("reduction_summary.json", json_text(reduction_summary_json(result.reduction)));
  tree.add("solutions_by_granularity.csv",
           solutions_csv(solutions_by_granularity(summaries, options.model_cap),
                         options.model_cap));
  tree.add("solutions_by_anomaly.csv",
           solutions_csv(solutions_by_anomaly(summaries, options.model_cap),
                         options.model_cap));
  tree.add("cnf_solutions.csv", cnf_solutions_csv(result.solved));
  tree.add("solvability.json",
           json_text(solvability_shares(summaries, options.model_cap).to_json()));
  if (options.debug_trace) {
    std::string lines;
    for (const auto& t : result.traces) lines += t.dump() + "\n";
    tree.add("path_inference_trace.jsonl", std::move(lines));
  }
}

int cmd_localize(const GlobalFlags& g, bool with_leakage, std::ostream& err) {
  const PipelineOptions options = pipeline_options(g);
  const LoadedInputs in = load_inputs(g, with_leakage);
  const LocalizeResult result = localize(in.records, in.table, options);
  OutputTree tree(g.out, g.force);
  add_localize_outputs(tree, in, result, options, err);
  if (with_leakage) {
    const LeakageReport leak = detect_leakage(result.solved, *in.registry);
    for (const auto& w : leak.warnings) err << "warning: " << w << "\n";
    tree.add("leakage.json", json_text(leakage_json(leak)));
  }
  tree.commit();
  return kExitOk;
}

int cmd_churn(const GlobalFlags& g) {
  const PipelineOptions options = pipeline_options(g);
  const LoadedInputs in = load_inputs(g, false);
  std::vector<MeasurementRecord> selected;
  for (const auto& r : in.records) {
    if (options.anomalies.empty() ||
        std::find(options.anomalies.begin(), options.anomalies.end(), r.anomaly) !=
            options.anomalies.end())
      selected.push_back(r);
  }
  EliminationSummary elim;
  const auto observations = infer_observations(selected, in.table, &elim);
  std::vector<ChurnReport> reports;
  for (TimeGranularity gran : options.granularities)
    reports.push_back(churn_stats(observations, gran));
  OutputTree tree(g.out, g.force);
  tree.add("ingest_summary.json", json_text(in.ingest_summary));
  tree.add("elimination_summary.json", json_text(elim.to_json()));
  tree.add("churn.csv", churn_csv(reports));
  tree.add("churn_summary.csv", churn_summary_csv(reports));
  tree.commit();
  return kExitOk;
}

int cmd_ablate(const GlobalFlags& g, std::ostream& err) {
  const PipelineOptions options = pipeline_options(g);
  const LoadedInputs in = load_inputs(g, false);
  const LocalizeResult base = localize(in.records, in.table, options);
  const auto ablated_obs = ablate_churn(base.observations);
  const auto ablated = solve_buckets(ablated_obs, options);
  const auto base_sum = summaries_of(base.solved);
  const auto abl_sum = summaries_of(ablated);
  const int cap = options.model_cap;

  OutputTree tree(g.out, g.force);
  add_localize_outputs(tree, in, base, options, err);
  tree.add("ablated_solutions_by_granularity.csv",
           solutions_csv(solutions_by_granularity(abl_sum, cap), cap));
  tree.add("ablated_solutions_by_anomaly.csv",
           solutions_csv(solutions_by_anomaly(abl_sum, cap), cap));
  tree.add("ablated_cnf_solutions.csv", cnf_solutions_csv(ablated));
  const json summary{{"observations", base.observations.size()},
                     {"ablated_observations", ablated_obs.size()},
                     {"baseline", solvability_shares(base_sum, cap).to_json()},
                     {"ablated", solvability_shares(abl_sum, cap).to_json()}};
  tree.add("ablation_summary.json", json_text(summary));
  tree.commit();
  return kExitOk;
}

int cmd_export_dimacs(const GlobalFlags& g) {
  const PipelineOptions options = pipeline_options(g);
  const LoadedInputs in = load_inputs(g, false);
  const LocalizeResult result = localize(in.records, in.table, options);
  OutputTree tree(g.out, g.force);
  for (const auto& s : result.solved)
    tree.add(dimacs_filename(s.instance.key), to_dimacs(s.instance));
  tree.add("cnf_solutions.csv", cnf_solutions_csv(result.solved));
  tree.commit();
  return kExitOk;
}

int cmd_solve_dimacs(const GlobalFlags& g, const std::string& file, std::ostream& out) {
  if (g.model_cap < 1) throw InputError("--model-cap must be at least 1");
  std::istringstream s(read_file(file, "dimacs"));
  const Cnf cnf = parse_dimacs(s);
  const SolveResult r = solve(cnf, g.model_cap);
  json backbone = json::object();
  for (std::size_t v = 0; v < r.backbone.size(); ++v)
    backbone[std::to_string(v + 1)] = to_string(r.backbone[v]);
  out << json{{"status", to_string(r.status)},
              {"count_capped", r.model_count_capped},
              {"backbone", backbone}}
             .dump()
      << "\n";
  return kExitOk;
}

int cmd_simulate(const GlobalFlags& g, SimParams params) {
  params.seed = g.seed;
  if (!g.anomalies.empty()) params.anomalies = pipeline_options(g).anomalies;
  const SyntheticWorld world = generate_world(params);
  const MeasurementStream stream = generate_measurements(world, params);
  std::string jsonl;
  for (const auto& r : stream.records) jsonl += to_jsonl(r) + "\n";
  OutputTree tree(g.out, g.force);
  tree.add("measurements.jsonl", std::move(jsonl));
  tree.add("pfx2as.tsv", world.pfx2as_tsv());
  tree.add("as_meta.csv", world.as_meta_csv());
  tree.add("ground_truth.json", json_text(stream.truth.to_json()));
  tree.commit();
  return kExitOk;
}

json read_json_file(const std::string& path, const char* what) {
  const std::string text = read_file(path, what);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid JSON in ") + what + " file: " + e.what());
  }
}

int cmd_evaluate(const std::string& censors_file, const std::string& truth_file,
                 std::ostream& out) {
  std::vector<CensorVerdict> verdicts;
  GroundTruth truth;
  try {
    verdicts = censors_from_json(read_json_file(censors_file, "censors-file"));
    truth = GroundTruth::from_json(read_json_file(truth_file, "truth"));
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed evaluation input: ") + e.what());
  }
  out << json_text(evaluate(verdicts, truth).to_json());
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Localize censoring ASes from censorship measurements", "censorloc"};
  app.require_subcommand(1);

  GlobalFlags g;
  app.add_option("--pfx2as", g.pfx2as, "Prefix-to-AS table (TSV)");
  app.add_option("--as-meta", g.as_meta, "AS metadata (CSV: asn,country,name)");
  app.add_option("--measurements", g.measurements, "Measurement records (JSONL)");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--granularity", g.granularities, "day, week, month or year (repeatable)");
  app.add_option("--anomaly", g.anomalies,
                 "dns, seqno, ttl, reset or blockpage (repeatable)");
  app.add_option("--model-cap", g.model_cap, "Model counting cap");
  app.add_option("--workers", g.workers, "Solver threads");
  app.add_option("--seed", g.seed, "Simulation seed");
  app.add_flag("--force", g.force, "Write into a non-empty output directory");
  app.add_flag("--no-url-split", g.no_url_split, "Bucket all URLs together");
  app.add_flag("--debug-trace", g.debug_trace, "Write path_inference_trace.jsonl");
  app.add_option("--from", g.from, "Drop records before this timestamp");
  app.add_option("--until", g.until, "Drop records after this timestamp");

  auto* localize_cmd = app.add_subcommand("localize", "Identify censoring ASes");
  auto* leak_cmd = app.add_subcommand("leak", "Localize, then report censorship leakage");
  auto* churn_cmd = app.add_subcommand("churn", "Path churn statistics");
  auto* ablate_cmd = app.add_subcommand("ablate", "Compare solvability without path churn");
  auto* export_cmd = app.add_subcommand("export-dimacs", "Write one DIMACS file per CNF");
  auto* solve_cmd = app.add_subcommand("solve-dimacs", "Solve one DIMACS file");
  std::string dimacs_file;
  solve_cmd->add_option("file", dimacs_file, "DIMACS CNF file")->required();

  SimParams sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a synthetic dataset");
  sim_cmd->add_option("--ases", sim.n_ases);
  sim_cmd->add_option("--vantages", sim.n_vantage);
  sim_cmd->add_option("--urls", sim.n_urls);
  sim_cmd->add_option("--censors", sim.n_censors);
  sim_cmd->add_option("--pool-size", sim.path_pool_size);
  sim_cmd->add_option("--churn", sim.churn_prob);
  sim_cmd->add_option("--noise", sim.noise_prob);
  sim_cmd->add_option("--days", sim.days);
  sim_cmd->add_option("--rounds", sim.rounds_per_day);
  sim_cmd->add_option("--nonresponsive", sim.nonresponsive_rate);
  sim_cmd->add_option("--max-hops", sim.max_transit_hops);
  sim_cmd->add_option("--skew", sim.transit_skew);
  sim_cmd->add_option("--start-date", sim.start_date);
  sim_cmd->add_option("--censor-from", sim.censor_first_day);
  sim_cmd->add_option("--censor-until", sim.censor_last_day);

  std::string censors_file, truth_file;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score censors.json against ground truth");
  eval_cmd->add_option("--censors-file", censors_file)->required();
  eval_cmd->add_option("--truth", truth_file)->required();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitInput;
  }

  try {
    if (localize_cmd->parsed()) return cmd_localize(g, false, err);
    if (leak_cmd->parsed()) return cmd_localize(g, true, err);
    if (churn_cmd->parsed()) return cmd_churn(g);
    if (ablate_cmd->parsed()) return cmd_ablate(g, err);
    if (export_cmd->parsed()) return cmd_export_dimacs(g);
    if (solve_cmd->parsed()) return cmd_solve_dimacs(g, dimacs_file, out);
    if (sim_cmd->parsed()) return cmd_simulate(g, sim);
    if (eval_cmd->parsed()) return cmd_evaluate(censors_file, truth_file, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace censorloc
