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

// Text renderings of pipeline results (JSON and CSV files).

#ifndef CENSORLOC_REPORT_H_
#define CENSORLOC_REPORT_H_

#include <span>
#include <string>

#include "censorloc/analysis.h"
#include "json.hpp"

namespace censorloc {

// Pretty-printed, newline-terminated.
std::string json_text(const nlohmann::json& j);

nlohmann::json censors_json(std::span<const CensorVerdict> verdicts);
std::vector<CensorVerdict> censors_from_json(const nlohmann::json& j);

std::string reduction_cdf_csv(const ReductionReport& report);
std::string reduction_stats_csv(const ReductionReport& report);
nlohmann::json reduction_summary_json(const ReductionReport& report);

// Long format: group,solutions,count,share. The last solutions bucket is
// labelled "<cap>+".
std::string solutions_csv(std::span<const SolutionDistribution> rows, int cap);

// One row per solved CNF.
std::string cnf_solutions_csv(std::span<const SolvedCnf> solved);

nlohmann::json leakage_json(const LeakageReport& report);

std::string churn_csv(std::span<const ChurnReport> reports);
std::string churn_summary_csv(std::span<const ChurnReport> reports);

}  // namespace censorloc

#endif  // CENSORLOC_REPORT_H_
