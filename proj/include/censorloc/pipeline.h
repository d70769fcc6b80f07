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

// End-to-end localization: records -> AS paths -> CNFs -> summaries ->
// verdicts. Shared by the CLI and the acceptance suite.

#ifndef CENSORLOC_PIPELINE_H_
#define CENSORLOC_PIPELINE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "censorloc/analysis.h"
#include "censorloc/aspath.h"
#include "censorloc/ingest.h"
#include "censorloc/model.h"
#include "censorloc/solver.h"
#include "json.hpp"

namespace censorloc {

struct PipelineOptions {
  std::vector<TimeGranularity> granularities{kAllGranularities.begin(),
                                             kAllGranularities.end()};
  std::vector<AnomalyType> anomalies;  // empty: all
  int model_cap = kDefaultModelCap;
  bool url_split = true;
  unsigned workers = 1;
  bool debug_trace = false;
};

// Buckets the observations at every requested granularity and solves each
// bucket. Output is sorted by bucket key regardless of worker count.
std::vector<SolvedCnf> solve_buckets(std::span<const PathObservation> observations,
                                     const PipelineOptions& options);

std::vector<SolutionSummary> summaries_of(std::span<const SolvedCnf> solved);

struct LocalizeResult {
  EliminationSummary elimination;
  std::vector<PathObservation> observations;
  std::vector<SolvedCnf> solved;
  std::vector<CensorVerdict> verdicts;
  ReductionReport reduction;
  std::vector<nlohmann::json> traces;  // filled when options.debug_trace
};

// Drops records whose anomaly is filtered out, infers paths, solves every
// bucket and derives verdicts.
LocalizeResult localize(std::span<const MeasurementRecord> records,
                        const PrefixTable& table, const PipelineOptions& options);

// Share of CNFs in each solution class; `capped` counts Multiple CNFs that
// reached the model cap.
struct SolvabilityShares {
  std::size_t cnfs = 0;
  double unsat = 0;
  double unique = 0;
  double multiple = 0;
  double capped = 0;

  nlohmann::json to_json() const;
};

SolvabilityShares solvability_shares(std::span<const SolutionSummary> summaries, int cap);

}  // namespace censorloc

#endif  // CENSORLOC_PIPELINE_H_
