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

// Interpretation of solved CNFs: censor verdicts, elimination statistics,
// censorship leakage, path churn and the churn-removal ablation.

#ifndef CENSORLOC_ANALYSIS_H_
#define CENSORLOC_ANALYSIS_H_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "censorloc/ingest.h"
#include "censorloc/model.h"

namespace censorloc {

struct SolvedCnf {
  CnfInstance instance;
  SolutionSummary summary;
};

// Per (asn, anomaly): Censor if forced true in some unique CNF, else
// PotentialCensor if not forced false in some multiple-solution CNF, else
// NonCensor. Sorted by (anomaly, asn).
std::vector<CensorVerdict> identify_censors(std::span<const SolutionSummary> summaries);

struct ReductionStat {
  BucketKey key;
  std::size_t n_vars = 0;
  std::size_t n_forced_false = 0;
  double fraction_eliminated = 0.0;
};

struct ReductionReport {
  std::vector<ReductionStat> stats;
  // (fraction, share of CNFs with fraction_eliminated <= fraction), 101 rows.
  std::vector<std::pair<double, double>> cdf;
  std::optional<double> mean;  // nullopt when there are no stats
};

// Only summaries with status Multiple contribute.
ReductionReport reduction_stats(std::span<const SolutionSummary> summaries);

struct CensorLeakage {
  std::size_t leaks_as = 0;
  std::size_t leaks_country = 0;
};

struct LeakageReport {
  std::vector<LeakageEdge> edges;
  std::map<Asn, CensorLeakage> per_censor;
  std::size_t skipped_missing_country = 0;
  std::vector<std::string> warnings;
};

// Victims are ASes forced false that precede a forced-true censor on a
// source path of a unique-solution CNF.
LeakageReport detect_leakage(std::span<const SolvedCnf> solved,
                             const AsRegistry& registry);

inline constexpr std::size_t kChurnHistogramBuckets = 5;  // 1, 2, 3, 4, 5+

struct ChurnCell {
  Asn vantage_asn = 0;
  Asn dst_asn = 0;
  std::string window_id;
  std::size_t measurements = 0;
  std::size_t distinct_paths = 0;
};

struct ChurnReport {
  TimeGranularity granularity = TimeGranularity::kDay;
  std::vector<ChurnCell> cells;  // sorted by (vantage, dst, window)
  // Cells with at least two measurements; only those can show churn.
  std::size_t eligible_cells = 0;
  std::size_t churning_cells = 0;
  std::optional<double> fraction_churning;
  std::array<std::size_t, kChurnHistogramBuckets> histogram{};
};

ChurnReport churn_stats(std::span<const PathObservation> observations,
                        TimeGranularity granularity);

// Keeps, per (vantage, destination AS), only the observations whose path
// equals the chronologically first path seen for that pair. Output is in
// timestamp order.
std::vector<PathObservation> ablate_churn(std::span<const PathObservation> observations);

// Counts of CNFs by number of solutions (0 .. cap-1, then cap+) per group.
struct SolutionDistribution {
  std::string group;
  std::vector<std::size_t> counts;  // size cap + 1
  std::size_t total = 0;
};

std::vector<SolutionDistribution> solutions_by_granularity(
    std::span<const SolutionSummary> summaries, int cap);
std::vector<SolutionDistribution> solutions_by_anomaly(
    std::span<const SolutionSummary> summaries, int cap);

}  // namespace censorloc

#endif  // CENSORLOC_ANALYSIS_H_
