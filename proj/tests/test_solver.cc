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

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "censorloc/solver.h"
#include "censorloc/tomography.h"
#include "doctest.h"
#include "test_util.h"

using namespace censorloc;
using namespace censorloc::testing;

namespace {

constexpr int x = 1, y = 2, z = 3;

Cnf cnf_of(int n, std::vector<std::vector<Literal>> clauses) { return {n, std::move(clauses)}; }

// Evaluator kept separate from the solver's own `satisfies`.
bool holds(const Cnf& f, const Assignment& a) {
  for (const auto& c : f.clauses) {
    bool sat = false;
    for (Literal l : c) sat = sat || (a.at(std::abs(l) - 1) == (l > 0));
    if (!sat) return false;
  }
  return true;
}

std::vector<BackboneValue> backbone_from_models(int n, const std::vector<Assignment>& models) {
  if (models.empty()) return {};
  std::vector<BackboneValue> out(n);
  for (int v = 0; v < n; ++v) {
    const bool any_t = std::any_of(models.begin(), models.end(), [&](const auto& m) { return m[v]; });
    const bool any_f = std::any_of(models.begin(), models.end(), [&](const auto& m) { return !m[v]; });
    out[v] = any_t && any_f ? BackboneValue::kFree
             : any_t        ? BackboneValue::kForcedTrue
                            : BackboneValue::kForcedFalse;
  }
  return out;
}

Cnf random_pipeline_cnf(std::mt19937_64& rng, int max_vars) {
  const int n = 1 + static_cast<int>(rng() % max_vars);
  Cnf f{n, {}};
  const int pos = static_cast<int>(rng() % 6);
  for (int i = 0; i < pos; ++i) {
    std::set<Literal> lits;
    const int k = 1 + static_cast<int>(rng() % std::min(n, 5));
    while (static_cast<int>(lits.size()) < k) lits.insert(1 + static_cast<int>(rng() % n));
    f.clauses.emplace_back(lits.begin(), lits.end());
  }
  const int neg = static_cast<int>(rng() % (n + 1));
  for (int i = 0; i < neg; ++i) f.clauses.push_back({-(1 + static_cast<int>(rng() % n))});
  std::shuffle(f.clauses.begin(), f.clauses.end(), rng);
  return f;
}

Cnf random_general_cnf(std::mt19937_64& rng, int max_vars) {
  const int n = 1 + static_cast<int>(rng() % max_vars);
  Cnf f{n, {}};
  const int m = static_cast<int>(rng() % (3 * n + 2));
  for (int i = 0; i < m; ++i) {
    std::vector<Literal> c;
    const int k = 1 + static_cast<int>(rng() % 3);
    for (int j = 0; j < k; ++j) {
      const int v = 1 + static_cast<int>(rng() % n);
      c.push_back(rng() % 2 ? v : -v);
    }
    f.clauses.push_back(c);
  }
  return f;
}

}  // namespace

TEST_CASE("check_sat examples") {
  SatResult r = check_sat(cnf_of(3, {{x, y, z}, {-x}, {-y}}));
  REQUIRE(r.satisfiable);
  CHECK(r.witness == Assignment{false, false, true});
  CHECK_FALSE(check_sat(cnf_of(1, {{x}, {-x}})).satisfiable);
  r = check_sat(cnf_of(2, {{x, y}}));
  REQUIRE(r.satisfiable);
  CHECK(holds(cnf_of(2, {{x, y}}), r.witness));
}

TEST_CASE("compute_backbone examples") {
  using B = BackboneValue;
  CHECK(compute_backbone(cnf_of(3, {{x, y, z}, {-x}, {-y}})) ==
        std::vector<B>{B::kForcedFalse, B::kForcedFalse, B::kForcedTrue});
  CHECK(compute_backbone(cnf_of(2, {{x, y}})) == std::vector<B>{B::kFree, B::kFree});
  CHECK(compute_backbone(cnf_of(1, {{x}})) == std::vector<B>{B::kForcedTrue});
  CHECK(compute_backbone(cnf_of(1, {{x}, {-x}})).empty());
}

TEST_CASE("count_models examples") {
  CHECK(count_models(cnf_of(3, {{x, y, z}, {-x}, {-y}}), 5) == 1);
  CHECK(count_models(cnf_of(2, {{x, y}}), 5) == 3);
  CHECK(count_models(cnf_of(1, {{x}, {-x}}), 5) == 0);
  CHECK(count_models(cnf_of(4, {}), 5) == 5);
  CHECK(count_models(cnf_of(0, {}), 5) == 1);
  CHECK_THROWS(count_models(cnf_of(1, {}), 0));
}

TEST_CASE("brute_force_models examples") {
  CHECK(brute_force_models(cnf_of(3, {{x, y, z}, {-x}, {-y}})) ==
        std::vector<Assignment>{{false, false, true}});
  CHECK(brute_force_models(cnf_of(1, {{-x}})) == std::vector<Assignment>{{false}});
  CHECK(brute_force_models(cnf_of(2, {{x, y}})).size() == 3);
  CHECK_THROWS_AS(brute_force_models(cnf_of(21, {})), std::invalid_argument);
  CHECK_NOTHROW(brute_force_models(cnf_of(3, {}), 3));
}

TEST_CASE("classify examples") {
  const BucketKey key{AnomalyType::kDns, "http://example.com/", TimeGranularity::kDay,
                      "2016-05-03"};
  const Asn X = 10, Y = 20, Z = 30;
  SolutionSummary s = classify(
      build_cnf(key, std::vector{obs("a", {X, Y, Z}, true), obs("b", {X, Y}, false)}));
  CHECK(s.status == SolveStatus::kUnique);
  CHECK(s.model_count_capped == 1);
  CHECK(s.backbone.at(Z) == BackboneValue::kForcedTrue);
  CHECK(s.backbone.at(X) == BackboneValue::kForcedFalse);

  s = classify(build_cnf(key, std::vector{obs("a", {X, Y}, true)}));
  CHECK(s.status == SolveStatus::kMultiple);
  CHECK(s.model_count_capped == 3);
  CHECK(s.backbone.at(X) == BackboneValue::kFree);
  CHECK(s.backbone.at(Y) == BackboneValue::kFree);

  s = classify(build_cnf(key, std::vector{obs("a", {X}, true), obs("b", {X}, false)}));
  CHECK(s.status == SolveStatus::kUnsat);
  CHECK(s.model_count_capped == 0);
  CHECK(s.backbone.empty());
}

TEST_CASE("property: pipeline-shape solver agrees with brute force") {
  std::mt19937_64 rng(1001);
  for (int iter = 0; iter < 2000; ++iter) {
    const Cnf f = random_pipeline_cnf(rng, 15);
    REQUIRE(has_pipeline_shape(f));
    const auto models = brute_force_models(f);
    const SatResult fast = check_sat_propagation(f);
    const SatResult general = check_sat_dpll(f);
    CHECK(fast.satisfiable == !models.empty());
    CHECK(general.satisfiable == !models.empty());
    if (fast.satisfiable) CHECK(holds(f, fast.witness));
    if (general.satisfiable) CHECK(holds(f, general.witness));
    CHECK(compute_backbone(f) == backbone_from_models(f.num_vars, models));
    CHECK(count_models(f, 5) == static_cast<int>(std::min<std::size_t>(models.size(), 5)));

    const SolveResult r = solve(f, 5);
    if (r.status == SolveStatus::kUnique) {
      CHECK(std::none_of(r.backbone.begin(), r.backbone.end(),
                         [](BackboneValue b) { return b == BackboneValue::kFree; }));
      // The single model is exactly the ForcedTrue set.
      for (int v = 0; v < f.num_vars; ++v)
        CHECK(models[0][v] == (r.backbone[v] == BackboneValue::kForcedTrue));
    }
  }
}

TEST_CASE("property: general DPLL agrees with brute force") {
  std::mt19937_64 rng(1002);
  for (int iter = 0; iter < 1000; ++iter) {
    const Cnf f = random_general_cnf(rng, 12);
    const auto models = brute_force_models(f);
    const SatResult r = check_sat(f);
    CHECK(r.satisfiable == !models.empty());
    if (r.satisfiable) CHECK(holds(f, r.witness));
    CHECK(compute_backbone(f) == backbone_from_models(f.num_vars, models));
    for (int cap : {1, 2, 5, 9})
      CHECK(count_models(f, cap) ==
            static_cast<int>(std::min<std::size_t>(models.size(), cap)));
  }
}

TEST_CASE("property: brute force matches an independent truth table") {
  std::mt19937_64 rng(1003);
  for (int iter = 0; iter < 300; ++iter) {
    const Cnf f = random_general_cnf(rng, 8);
    std::vector<Assignment> expected;
    for (std::uint32_t bits = 0; bits < (1u << f.num_vars); ++bits) {
      Assignment a(f.num_vars);
      for (int v = 0; v < f.num_vars; ++v) a[v] = (bits >> v) & 1;
      if (holds(f, a)) expected.push_back(a);
    }
    auto got = brute_force_models(f);
    std::sort(got.begin(), got.end());
    std::sort(expected.begin(), expected.end());
    CHECK(got == expected);
  }
}

TEST_CASE("property: residual positive formula is upward closed") {
  std::mt19937_64 rng(1004);
  for (int iter = 0; iter < 500; ++iter) {
    const Cnf f = random_pipeline_cnf(rng, 10);
    std::set<int> falsified;
    Cnf residual{f.num_vars, {}};
    for (const auto& c : f.clauses)
      if (c.size() == 1 && c[0] < 0) falsified.insert(-c[0]);
    for (const auto& c : f.clauses) {
      if (c.size() == 1 && c[0] < 0) continue;
      std::vector<Literal> kept;
      for (Literal l : c)
        if (!falsified.contains(l)) kept.push_back(l);
      residual.clauses.push_back(kept);
    }
    const auto models = brute_force_models(residual);
    const std::set<Assignment> model_set(models.begin(), models.end());
    for (const auto& m : models) {
      for (int v = 0; v < residual.num_vars; ++v) {
        if (m[v]) continue;
        Assignment up = m;
        up[v] = true;
        CHECK(model_set.contains(up));
      }
    }
  }
}

TEST_CASE("property: forced-true variables never sit on a false source path") {
  std::mt19937_64 rng(1005);
  const BucketKey key{AnomalyType::kTtl, "http://example.com/", TimeGranularity::kWeek,
                      "2016-W18"};
  for (int iter = 0; iter < 500; ++iter) {
    std::vector<PathObservation> in;
    const int n = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i) {
      std::vector<Asn> path;
      const int len = 1 + static_cast<int>(rng() % 4);
      for (int h = 0; h < len; ++h) {
        const Asn a = static_cast<Asn>(1 + rng() % 9);
        if (path.empty() || path.back() != a) path.push_back(a);
      }
      in.push_back(obs("r" + std::to_string(i), path, rng() % 2));
    }
    const CnfInstance cnf = build_cnf(key, in);
    const SolutionSummary s = classify(cnf);
    if (s.status == SolveStatus::kUnsat) continue;
    for (const auto& sp : cnf.source_paths) {
      if (sp.truth) continue;
      for (Asn a : sp.path.asns) CHECK(s.backbone.at(a) != BackboneValue::kForcedTrue);
    }
  }
}

TEST_CASE("parse_dimacs accepts standard input and rejects malformed files") {
  std::istringstream ok("c comment\np cnf 3 2\n1 -2 0\n3\n0\n");
  const Cnf f = parse_dimacs(ok);
  CHECK(f == cnf_of(3, {{1, -2}, {3}}));

  for (const char* bad : {"1 0\n", "p cnf 2 1\n3 0\n", "p cnf 2 2\n1 0\n", "p cnf x 1\n1 0\n",
                          "p cnf 2 1\n1 a 0\n", "p cnf 2 1\n1 2\n"}) {
    CAPTURE(bad);
    std::istringstream in(bad);
    CHECK_THROWS_AS(parse_dimacs(in), InputError);
  }
  std::istringstream empty_clauses("p cnf 2 0\n");
  CHECK(parse_dimacs(empty_clauses) == cnf_of(2, {}));
}

TEST_CASE("format_dimacs_body round trips") {
  std::mt19937_64 rng(1006);
  for (int iter = 0; iter < 200; ++iter) {
    const Cnf f = random_general_cnf(rng, 10);
    std::istringstream in(format_dimacs_body(f));
    CHECK(parse_dimacs(in) == f);
  }
}
