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

#include "censorloc/pipeline.h"

#include <algorithm>
#include <atomic>
#include <thread>

#include "censorloc/tomography.h"

namespace censorloc {

std::vector<SolvedCnf> solve_buckets(std::span<const PathObservation> observations,
                                     const PipelineOptions& options) {
  std::vector<CnfInstance> instances;
  for (TimeGranularity g : options.granularities) {
    for (const auto& [key, entries] : bucket(observations, g, options.url_split))
      instances.push_back(build_cnf(key, entries));
  }
  std::sort(instances.begin(), instances.end(),
            [](const auto& a, const auto& b) { return a.key < b.key; });

  std::vector<SolvedCnf> solved(instances.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < instances.size(); i = next++) {
      solved[i].summary = classify(instances[i], options.model_cap);
      solved[i].instance = std::move(instances[i]);
    }
  };
  const unsigned workers = std::max(1u, options.workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return solved;
}

std::vector<SolutionSummary> summaries_of(std::span<const SolvedCnf> solved) {
  std::vector<SolutionSummary> out;
  out.reserve(solved.size());
  for (const auto& s : solved) out.push_back(s.summary);
  return out;
}

LocalizeResult localize(std::span<const MeasurementRecord> records,
                        const PrefixTable& table, const PipelineOptions& options) {
  std::vector<MeasurementRecord> selected;
  for (const auto& rec : records) {
    if (options.anomalies.empty() ||
        std::find(options.anomalies.begin(), options.anomalies.end(), rec.anomaly) !=
            options.anomalies.end())
      selected.push_back(rec);
  }

  LocalizeResult result;
  result.observations = infer_observations(selected, table, &result.elimination,
                                           options.debug_trace ? &result.traces : nullptr);
  result.solved = solve_buckets(result.observations, options);
  const auto summaries = summaries_of(result.solved);
  result.verdicts = identify_censors(summaries);
  result.reduction = reduction_stats(summaries);
  return result;
}

nlohmann::json SolvabilityShares::to_json() const {
  return {{"cnfs", cnfs},
          {"unsat_share", unsat},
          {"unique_share", unique},
          {"multiple_share", multiple},
          {"capped_share", capped}};
}

SolvabilityShares solvability_shares(std::span<const SolutionSummary> summaries, int cap) {
  SolvabilityShares s;
  s.cnfs = summaries.size();
  if (summaries.empty()) return s;
  for (const auto& summary : summaries) {
    switch (summary.status) {
      case SolveStatus::kUnsat:
        s.unsat += 1;
        break;
      case SolveStatus::kUnique:
        s.unique += 1;
        break;
      case SolveStatus::kMultiple:
        s.multiple += 1;
        if (summary.model_count_capped >= cap) s.capped += 1;
        break;
    }
  }
  const double n = static_cast<double>(s.cnfs);
  s.unsat /= n;
  s.unique /= n;
  s.multiple /= n;
  s.capped /= n;
  return s;
}

}  // namespace censorloc
