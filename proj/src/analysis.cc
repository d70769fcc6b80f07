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

#include "censorloc/analysis.h"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <tuple>

#include "censorloc/ingest.h"

namespace censorloc {
namespace {

struct ClassWitnesses {
  std::set<BucketKey> censor;
  std::set<BucketKey> potential;
  std::set<BucketKey> non_censor;
};

std::vector<PathObservation> sorted_by_time(std::span<const PathObservation> obs) {
  std::vector<PathObservation> out(obs.begin(), obs.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.timestamp < b.timestamp;
  });
  return out;
}

template <typename KeyFn>
std::vector<SolutionDistribution> distribution(
    std::span<const SolutionSummary> summaries, int cap, KeyFn key_of) {
  std::map<decltype(key_of(summaries.front())), SolutionDistribution> groups;
  for (const auto& s : summaries) {
    auto& g = groups[key_of(s)];
    if (g.counts.empty()) {
      g.group = std::string(to_string(key_of(s)));
      g.counts.assign(cap + 1, 0);
    }
    ++g.counts[std::min(s.model_count_capped, cap)];
    ++g.total;
  }
  std::vector<SolutionDistribution> out;
  for (auto& [_, g] : groups) out.push_back(std::move(g));
  return out;
}

}  // namespace

std::vector<CensorVerdict> identify_censors(std::span<const SolutionSummary> summaries) {
  std::map<std::pair<AnomalyType, Asn>, ClassWitnesses> by_as;
  for (const auto& s : summaries) {
    for (const auto& [asn, value] : s.backbone) {
      auto& w = by_as[{s.key.anomaly, asn}];
      if (s.status == SolveStatus::kUnique && value == BackboneValue::kForcedTrue) {
        w.censor.insert(s.key);
      } else if (s.status == SolveStatus::kMultiple &&
                 value != BackboneValue::kForcedFalse) {
        w.potential.insert(s.key);
      } else if (value == BackboneValue::kForcedFalse) {
        w.non_censor.insert(s.key);
      }
    }
  }
  std::vector<CensorVerdict> verdicts;
  for (const auto& [id, w] : by_as) {
    CensorVerdict v{id.second, CensorClass::kNonCensor, id.first, {}};
    const std::set<BucketKey>* witnesses = &w.non_censor;
    if (!w.censor.empty()) {
      v.cls = CensorClass::kCensor;
      witnesses = &w.censor;
    } else if (!w.potential.empty()) {
      v.cls = CensorClass::kPotentialCensor;
      witnesses = &w.potential;
    }
    v.witnesses.assign(witnesses->begin(), witnesses->end());
    verdicts.push_back(std::move(v));
  }
  return verdicts;
}

ReductionReport reduction_stats(std::span<const SolutionSummary> summaries) {
  ReductionReport report;
  double sum = 0.0;
  for (const auto& s : summaries) {
    if (s.status != SolveStatus::kMultiple) continue;
    ReductionStat stat{s.key, s.backbone.size(), 0, 0.0};
    for (const auto& [_, value] : s.backbone) {
      if (value == BackboneValue::kForcedFalse) ++stat.n_forced_false;
    }
    if (stat.n_vars > 0) {
      stat.fraction_eliminated =
          static_cast<double>(stat.n_forced_false) / static_cast<double>(stat.n_vars);
    }
    sum += stat.fraction_eliminated;
    report.stats.push_back(std::move(stat));
  }
  if (report.stats.empty()) return report;

  const double n = static_cast<double>(report.stats.size());
  report.mean = sum / n;
  std::vector<double> fractions;
  for (const auto& st : report.stats) fractions.push_back(st.fraction_eliminated);
  std::sort(fractions.begin(), fractions.end());
  for (int i = 0; i <= 100; ++i) {
    const double f = i / 100.0;
    // Tolerance absorbs binary rounding of i/100 against k/n.
    auto upto = std::upper_bound(fractions.begin(), fractions.end(), f + 1e-9);
    report.cdf.emplace_back(f, static_cast<double>(upto - fractions.begin()) / n);
  }
  return report;
}

LeakageReport detect_leakage(std::span<const SolvedCnf> solved,
                             const AsRegistry& registry) {
  LeakageReport report;
  std::map<Asn, std::set<Asn>> victims;
  std::map<Asn, std::set<std::string>> victim_countries;
  std::set<Asn> missing;

  auto note_missing = [&](Asn asn) {
    ++report.skipped_missing_country;
    if (missing.insert(asn).second) {
      report.warnings.push_back("no country for AS" + std::to_string(asn) +
                                "; leakage edges skipped");
    }
  };

  for (const auto& cnf : solved) {
    const SolutionSummary& s = cnf.summary;
    if (s.status != SolveStatus::kUnique) continue;
    auto value_of = [&](Asn asn) {
      auto it = s.backbone.find(asn);
      return it == s.backbone.end() ? BackboneValue::kFree : it->second;
    };

    // One edge per (censor, victim) and CNF, witnessed by the earliest path.
    std::set<std::pair<Asn, Asn>> emitted;
    for (const SourcePath& sp : cnf.instance.source_paths) {
      const auto& asns = sp.path.asns;
      std::set<Asn> seen_censors;
      for (std::size_t ci = 0; ci < asns.size(); ++ci) {
        const Asn censor = asns[ci];
        if (value_of(censor) != BackboneValue::kForcedTrue) continue;
        if (!sp.truth) {
          throw std::logic_error("AS" + std::to_string(censor) +
                                 " forced true on clean path of record " +
                                 sp.record_id);
        }
        if (!seen_censors.insert(censor).second) continue;
        const AsInfo* censor_info = registry.find(censor);
        for (std::size_t vi = 0; vi < ci; ++vi) {
          const Asn victim = asns[vi];
          if (value_of(victim) != BackboneValue::kForcedFalse) continue;
          if (!emitted.insert({censor, victim}).second) continue;
          const AsInfo* victim_info = registry.find(victim);
          if (!censor_info) {
            note_missing(censor);
            continue;
          }
          if (!victim_info) {
            note_missing(victim);
            continue;
          }
          LeakageEdge edge{censor,      victim,        censor_info->country,
                           victim_info->country, s.key.anomaly, s.key,
                           sp.record_id};
          victims[censor].insert(victim);
          if (edge.cross_country()) victim_countries[censor].insert(edge.victim_country);
          report.edges.push_back(std::move(edge));
        }
      }
    }
  }

  std::sort(report.edges.begin(), report.edges.end(), [](const auto& a, const auto& b) {
    return std::tie(a.censor_asn, a.victim_asn, a.witness_key, a.witness_record_id) <
           std::tie(b.censor_asn, b.victim_asn, b.witness_key, b.witness_record_id);
  });
  for (const auto& [censor, vs] : victims) {
    report.per_censor[censor] = {vs.size(), victim_countries[censor].size()};
  }
  return report;
}

ChurnReport churn_stats(std::span<const PathObservation> observations,
                        TimeGranularity granularity) {
  struct Acc {
    std::size_t measurements = 0;
    std::set<AsPath> paths;
  };
  std::map<std::tuple<Asn, Asn, std::string>, Acc> cells;
  for (const auto& obs : observations) {
    auto& acc = cells[{obs.vantage_asn, obs.dst_asn, window_id(obs.timestamp, granularity)}];
    ++acc.measurements;
    acc.paths.insert(obs.path);
  }

  ChurnReport report;
  report.granularity = granularity;
  for (const auto& [key, acc] : cells) {
    const auto& [vantage, dst, window] = key;
    ChurnCell cell{vantage, dst, window, acc.measurements, acc.paths.size()};
    ++report.histogram[std::min(cell.distinct_paths, kChurnHistogramBuckets) - 1];
    if (cell.measurements >= 2) {
      ++report.eligible_cells;
      if (cell.distinct_paths >= 2) ++report.churning_cells;
    }
    report.cells.push_back(std::move(cell));
  }
  if (report.eligible_cells > 0) {
    report.fraction_churning = static_cast<double>(report.churning_cells) /
                               static_cast<double>(report.eligible_cells);
  }
  return report;
}

std::vector<PathObservation> ablate_churn(std::span<const PathObservation> observations) {
  std::vector<PathObservation> ordered = sorted_by_time(observations);
  std::map<std::pair<Asn, Asn>, AsPath> first_path;
  std::vector<PathObservation> kept;
  for (auto& obs : ordered) {
    auto [it, inserted] = first_path.try_emplace({obs.vantage_asn, obs.dst_asn}, obs.path);
    if (inserted || it->second == obs.path) kept.push_back(std::move(obs));
  }
  return kept;
}

std::vector<SolutionDistribution> solutions_by_granularity(
    std::span<const SolutionSummary> summaries, int cap) {
  if (summaries.empty()) return {};
  return distribution(summaries, cap,
                      [](const SolutionSummary& s) { return s.key.granularity; });
}

std::vector<SolutionDistribution> solutions_by_anomaly(
    std::span<const SolutionSummary> summaries, int cap) {
  if (summaries.empty()) return {};
  return distribution(summaries, cap,
                      [](const SolutionSummary& s) { return s.key.anomaly; });
}

}  // namespace censorloc
