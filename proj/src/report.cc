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

#include "censorloc/report.h"

#include <cstdio>

#include "censorloc/tomography.h"

namespace censorloc {
namespace {

using nlohmann::json;

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

json censors_json(std::span<const CensorVerdict> verdicts) {
  json out = json::array();
  for (const auto& v : verdicts) out.push_back(v);
  return out;
}

std::vector<CensorVerdict> censors_from_json(const json& j) {
  return j.get<std::vector<CensorVerdict>>();
}

std::string reduction_cdf_csv(const ReductionReport& report) {
  std::string out = "fraction,cumulative_share\n";
  for (const auto& [fraction, share] : report.cdf)
    out += fixed(fraction, 2) + "," + fixed(share, 6) + "\n";
  return out;
}

std::string reduction_stats_csv(const ReductionReport& report) {
  std::string out = "anomaly,url,granularity,window,n_vars,n_forced_false,fraction_eliminated\n";
  for (const auto& s : report.stats) {
    out += std::string(to_string(s.key.anomaly)) + "," + csv_field(s.key.url) + "," +
           std::string(to_string(s.key.granularity)) + "," + s.key.window_id + "," +
           std::to_string(s.n_vars) + "," + std::to_string(s.n_forced_false) + "," +
           fixed(s.fraction_eliminated, 6) + "\n";
  }
  return out;
}

json reduction_summary_json(const ReductionReport& report) {
  std::size_t none = 0;
  for (const auto& s : report.stats) {
    if (s.n_forced_false == 0) ++none;
  }
  json j{{"multiple_cnfs", report.stats.size()}};
  j["mean_fraction_eliminated"] = report.mean ? json(*report.mean) : json("n/a");
  j["no_elimination_share"] =
      report.stats.empty() ? json("n/a")
                           : json(static_cast<double>(none) / report.stats.size());
  return j;
}

std::string solutions_csv(std::span<const SolutionDistribution> rows, int cap) {
  std::string out = "group,solutions,count,share\n";
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.counts.size(); ++k) {
      const std::string label =
          static_cast<int>(k) == cap ? std::to_string(cap) + "+" : std::to_string(k);
      const double share =
          row.total ? static_cast<double>(row.counts[k]) / row.total : 0.0;
      out += row.group + "," + label + "," + std::to_string(row.counts[k]) + "," +
             fixed(share, 6) + "\n";
    }
  }
  return out;
}

std::string cnf_solutions_csv(std::span<const SolvedCnf> solved) {
  std::string out =
      "anomaly,url,granularity,window,status,count_capped,n_vars,n_clauses,file\n";
  for (const auto& s : solved) {
    const BucketKey& k = s.summary.key;
    out += std::string(to_string(k.anomaly)) + "," + csv_field(k.url) + "," +
           std::string(to_string(k.granularity)) + "," + k.window_id + "," +
           std::string(to_string(s.summary.status)) + "," +
           std::to_string(s.summary.model_count_capped) + "," +
           std::to_string(s.instance.variables.size()) + "," +
           std::to_string(s.instance.clauses.size()) + "," + dimacs_filename(k) + "\n";
  }
  return out;
}

json leakage_json(const LeakageReport& report) {
  json censors = json::array();
  for (const auto& [asn, agg] : report.per_censor) {
    censors.push_back(
        {{"censor_asn", asn}, {"leaks_as", agg.leaks_as}, {"leaks_country", agg.leaks_country}});
  }
  return json{{"edges", report.edges},
              {"censors", censors},
              {"skipped_missing_country", report.skipped_missing_country},
              {"warnings", report.warnings}};
}

std::string churn_csv(std::span<const ChurnReport> reports) {
  std::string out = "pair,granularity,window,distinct_paths\n";
  for (const auto& r : reports) {
    for (const auto& c : r.cells) {
      out += std::to_string(c.vantage_asn) + "-" + std::to_string(c.dst_asn) + "," +
             std::string(to_string(r.granularity)) + "," + c.window_id + "," +
             std::to_string(c.distinct_paths) + "\n";
    }
  }
  return out;
}

std::string churn_summary_csv(std::span<const ChurnReport> reports) {
  std::string out =
      "granularity,cells,eligible_cells,churning_cells,fraction_churning,"
      "paths_1,paths_2,paths_3,paths_4,paths_5plus\n";
  for (const auto& r : reports) {
    out += std::string(to_string(r.granularity)) + "," + std::to_string(r.cells.size()) +
           "," + std::to_string(r.eligible_cells) + "," +
           std::to_string(r.churning_cells) + "," +
           (r.fraction_churning ? fixed(*r.fraction_churning, 6) : std::string("n/a"));
    for (std::size_t n : r.histogram) out += "," + std::to_string(n);
    out += "\n";
  }
  return out;
}

}  // namespace censorloc
