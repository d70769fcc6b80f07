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

// Satisfiability, backbone and capped model counting.
//
// The tomography CNFs have a restricted shape: every clause is either
// all-positive or a negative unit. For that shape satisfiability reduces to
// unit propagation (the residual positive formula is satisfied by setting
// every remaining variable true). Anything else, including DIMACS files
// supplied from outside, goes through a plain DPLL search.

#ifndef CENSORLOC_SOLVER_H_
#define CENSORLOC_SOLVER_H_

#include <cstddef>
#include <vector>

#include "censorloc/cnf.h"
#include "censorloc/model.h"

namespace censorloc {

inline constexpr int kDefaultModelCap = 5;

// values[i] is the value of variable i + 1.
using Assignment = std::vector<bool>;

struct SatResult {
  bool satisfiable = false;
  Assignment witness;  // total when satisfiable
};

bool has_pipeline_shape(const Cnf& cnf);
bool satisfies(const Cnf& cnf, const Assignment& assignment);

// Dispatches to the propagation fast path when the shape allows it.
SatResult check_sat(const Cnf& cnf);
SatResult check_sat_propagation(const Cnf& cnf);  // requires pipeline shape
SatResult check_sat_dpll(const Cnf& cnf);

// One probe per variable: the witness already shows which polarity is
// possible. Empty when cnf is unsatisfiable.
std::vector<BackboneValue> compute_backbone(const Cnf& cnf);

// min(#models, cap), by enumeration with blocking clauses.
int count_models(const Cnf& cnf, int cap);

// Exhaustive enumeration of all 2^n assignments, in ascending bit order.
// Throws std::invalid_argument when num_vars > max_vars.
std::vector<Assignment> brute_force_models(const Cnf& cnf, int max_vars = 20);

struct SolveResult {
  SolveStatus status = SolveStatus::kUnsat;
  int model_count_capped = 0;
  std::vector<BackboneValue> backbone;  // indexed by variable - 1
};

SolveResult solve(const Cnf& cnf, int cap = kDefaultModelCap);

SolutionSummary classify(const CnfInstance& instance, int cap = kDefaultModelCap);

}  // namespace censorloc

#endif  // CENSORLOC_SOLVER_H_
