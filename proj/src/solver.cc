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

#include "censorloc/solver.h"

#include <cstdint>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>

#include "censorloc/tomography.h"

namespace censorloc {
namespace {

// 0 unassigned, +1 true, -1 false; slot 0 unused.
using PartialAssignment = std::vector<std::int8_t>;

bool literal_true(Literal lit, const PartialAssignment& a) {
  const std::int8_t v = a[std::abs(lit)];
  return v != 0 && (v > 0) == (lit > 0);
}

bool dpll(const std::vector<std::vector<Literal>>& clauses, PartialAssignment& a) {
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& clause : clauses) {
      int unassigned = 0;
      Literal last = 0;
      bool sat = false;
      for (Literal lit : clause) {
        const std::int8_t v = a[std::abs(lit)];
        if (v == 0) {
          ++unassigned;
          last = lit;
        } else if ((v > 0) == (lit > 0)) {
          sat = true;
          break;
        }
      }
      if (sat) continue;
      if (unassigned == 0) return false;
      if (unassigned == 1) {
        a[std::abs(last)] = last > 0 ? 1 : -1;
        changed = true;
      }
    }
  }

  int pick = 0;
  for (const auto& clause : clauses) {
    bool sat = false;
    int candidate = 0;
    for (Literal lit : clause) {
      if (literal_true(lit, a)) {
        sat = true;
        break;
      }
      if (!candidate && a[std::abs(lit)] == 0) candidate = std::abs(lit);
    }
    if (!sat && candidate) {
      pick = candidate;
      break;
    }
  }
  if (pick == 0) return true;

  for (std::int8_t value : {std::int8_t{-1}, std::int8_t{1}}) {
    PartialAssignment saved = a;
    a[pick] = value;
    if (dpll(clauses, a)) return true;
    a = std::move(saved);
  }
  return false;
}

Cnf with_unit(const Cnf& cnf, Literal unit) {
  Cnf probe = cnf;
  probe.clauses.push_back({unit});
  return probe;
}

}  // namespace

bool has_pipeline_shape(const Cnf& cnf) {
  for (const auto& clause : cnf.clauses) {
    if (clause.empty()) return false;
    if (clause.size() == 1) continue;
    for (Literal lit : clause) {
      if (lit < 0) return false;
    }
  }
  return true;
}

bool satisfies(const Cnf& cnf, const Assignment& assignment) {
  if (assignment.size() != static_cast<std::size_t>(cnf.num_vars)) return false;
  for (const auto& clause : cnf.clauses) {
    bool sat = false;
    for (Literal lit : clause) {
      if (assignment[std::abs(lit) - 1] == (lit > 0)) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

SatResult check_sat_propagation(const Cnf& cnf) {
  std::vector<bool> forced_false(cnf.num_vars + 1, false);
  for (const auto& clause : cnf.clauses) {
    if (clause.size() == 1 && clause[0] < 0) forced_false[-clause[0]] = true;
  }
  for (const auto& clause : cnf.clauses) {
    if (clause.front() < 0) continue;
    bool open = false;
    for (Literal lit : clause) {
      if (!forced_false[lit]) {
        open = true;
        break;
      }
    }
    if (!open) return {};
  }
  SatResult result{true, Assignment(cnf.num_vars)};
  for (int v = 1; v <= cnf.num_vars; ++v) result.witness[v - 1] = !forced_false[v];
  return result;
}

SatResult check_sat_dpll(const Cnf& cnf) {
  PartialAssignment a(cnf.num_vars + 1, 0);
  if (!dpll(cnf.clauses, a)) return {};
  SatResult result{true, Assignment(cnf.num_vars)};
  for (int v = 1; v <= cnf.num_vars; ++v) result.witness[v - 1] = a[v] > 0;
  return result;
}

SatResult check_sat(const Cnf& cnf) {
  return has_pipeline_shape(cnf) ? check_sat_propagation(cnf) : check_sat_dpll(cnf);
}

std::vector<BackboneValue> compute_backbone(const Cnf& cnf) {
  const SatResult base = check_sat(cnf);
  if (!base.satisfiable) return {};
  std::vector<BackboneValue> backbone(cnf.num_vars, BackboneValue::kFree);
  for (int v = 1; v <= cnf.num_vars; ++v) {
    // The witness already shows one polarity is possible; probe the other.
    if (base.witness[v - 1]) {
      if (!check_sat(with_unit(cnf, -v)).satisfiable)
        backbone[v - 1] = BackboneValue::kForcedTrue;
    } else {
      if (!check_sat(with_unit(cnf, v)).satisfiable)
        backbone[v - 1] = BackboneValue::kForcedFalse;
    }
  }
  return backbone;
}

int count_models(const Cnf& cnf, int cap) {
  if (cap < 1) throw std::invalid_argument("model cap must be positive");
  Cnf work = cnf;
  int count = 0;
  while (count < cap) {
    SatResult r = check_sat(work);
    if (!r.satisfiable) break;
    ++count;
    std::vector<Literal> blocking;
    blocking.reserve(cnf.num_vars);
    for (int v = 1; v <= cnf.num_vars; ++v) blocking.push_back(r.witness[v - 1] ? -v : v);
    if (blocking.empty()) break;  // zero variables: exactly one (empty) model
    work.clauses.push_back(std::move(blocking));
  }
  return count;
}

std::vector<Assignment> brute_force_models(const Cnf& cnf, int max_vars) {
  if (cnf.num_vars > max_vars || cnf.num_vars > 30) {
    throw std::invalid_argument("brute force refused: " +
                                std::to_string(cnf.num_vars) + " variables");
  }
  std::vector<Assignment> models;
  const std::uint64_t total = std::uint64_t{1} << cnf.num_vars;
  Assignment a(cnf.num_vars);
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    for (int i = 0; i < cnf.num_vars; ++i) a[i] = (bits >> i) & 1;
    if (satisfies(cnf, a)) models.push_back(a);
  }
  return models;
}

SolveResult solve(const Cnf& cnf, int cap) {
  SolveResult r;
  r.model_count_capped = count_models(cnf, cap);
  if (r.model_count_capped == 0) return r;
  r.status = r.model_count_capped == 1 ? SolveStatus::kUnique : SolveStatus::kMultiple;
  r.backbone = compute_backbone(cnf);
  return r;
}

SolutionSummary classify(const CnfInstance& instance, int cap) {
  const SolveResult r = solve(to_cnf_clauses(instance), cap);
  SolutionSummary s{instance.key, r.status, r.model_count_capped, {}};
  for (std::size_t i = 0; i < r.backbone.size(); ++i)
    s.backbone[instance.variables[i]] = r.backbone[i];
  return s;
}

Cnf parse_dimacs(std::istream& in) {
  Cnf cnf;
  bool header = false;
  std::size_t declared_clauses = 0;
  std::vector<Literal> current;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first[0] == 'c') continue;
    if (first[0] == '%') break;  // SATLIB end marker
    if (first == "p") {
      std::string fmt;
      long long vars = -1, clauses = -1;
      if (header || !(ls >> fmt >> vars >> clauses) || fmt != "cnf" || vars < 0 ||
          clauses < 0 || vars > 1'000'000)
        throw InputError("DIMACS line " + std::to_string(line_no) + ": bad header");
      header = true;
      cnf.num_vars = static_cast<int>(vars);
      declared_clauses = static_cast<std::size_t>(clauses);
      continue;
    }
    if (!header) throw InputError("DIMACS: clause before \"p cnf\" header");
    ls.clear();
    ls.seekg(0);
    long long lit;
    while (ls >> lit) {
      if (lit == 0) {
        cnf.clauses.push_back(std::move(current));
        current.clear();
      } else if (std::llabs(lit) > cnf.num_vars) {
        throw InputError("DIMACS line " + std::to_string(line_no) +
                         ": literal out of range");
      } else {
        current.push_back(static_cast<Literal>(lit));
      }
    }
    if (!ls.eof()) {
      throw InputError("DIMACS line " + std::to_string(line_no) + ": not an integer");
    }
  }
  if (!header) throw InputError("DIMACS: missing \"p cnf\" header");
  if (!current.empty()) throw InputError("DIMACS: unterminated final clause");
  if (cnf.clauses.size() != declared_clauses) {
    throw InputError("DIMACS: header declares " + std::to_string(declared_clauses) +
                     " clauses, found " + std::to_string(cnf.clauses.size()));
  }
  return cnf;
}

std::string format_dimacs_body(const Cnf& cnf) {
  std::string out = "p cnf " + std::to_string(cnf.num_vars) + " " +
                    std::to_string(cnf.clauses.size()) + "\n";
  for (const auto& clause : cnf.clauses) {
    for (Literal lit : clause) out += std::to_string(lit) + " ";
    out += "0\n";
  }
  return out;
}

}  // namespace censorloc
