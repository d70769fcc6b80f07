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

// Synthetic worlds with planted censors, used to validate the pipeline end
// to end. The simulator emits the same external formats the pipeline
// ingests (measurement JSONL, pfx2as TSV, AS metadata CSV) plus the ground
// truth needed to score the result.

#ifndef CENSORLOC_SIMULATE_H_
#define CENSORLOC_SIMULATE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "censorloc/model.h"
#include "json.hpp"

namespace censorloc {

struct SimParams {
  std::uint64_t seed = 1;
  int n_ases = 50;
  int n_vantage = 10;
  int n_urls = 20;
  int n_censors = 3;
  int path_pool_size = 4;
  double churn_prob = 0.3;   // per-round probability that a pair switches path
  double noise_prob = 0.0;   // per-measurement verdict flip probability
  int days = 90;
  // Measurement rounds per day. Churn is drawn before every round, so pairs
  // can change path within a day.
  int rounds_per_day = 6;
  std::vector<AnomalyType> anomalies{kAllAnomalies.begin(), kAllAnomalies.end()};

  // Topology and emission knobs.
  double nonresponsive_rate = 0.0;  // per-hop probability of a "*" hop
  int max_transit_hops = 3;
  double transit_skew = 0.0;  // Zipf exponent of transit popularity
  std::string start_date = "2016-05-02";
  // Active day range of every planted censor, 1-based and inclusive.
  // 0 for censor_last_day means the final simulated day.
  int censor_first_day = 1;
  int censor_last_day = 0;

  // Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

struct SimAs {
  Asn asn = 0;
  std::string country;
  Ipv4 prefix;  // a /16
  enum class Role { kVantage, kHost, kTransit } role = Role::kTransit;
};

struct SimUrl {
  std::string url;
  Asn host_asn = 0;
  Ipv4 dst_ip;
};

struct PlantedCensor {
  Asn asn = 0;
  AnomalyType anomaly = AnomalyType::kDns;
  std::vector<std::string> urls;  // sorted
  int first_day = 1;
  int last_day = 1;

  bool active(const std::string& url, AnomalyType a, int day) const;
  bool operator==(const PlantedCensor&) const = default;
};

struct SyntheticWorld {
  std::vector<SimAs> ases;
  std::vector<Asn> vantages;
  std::vector<SimUrl> urls;
  // Candidate AS paths per (vantage, host AS), all distinct.
  std::map<std::pair<Asn, Asn>, std::vector<AsPath>> pools;
  std::vector<PlantedCensor> censors;

  const SimAs& as_info(Asn asn) const;
  std::string pfx2as_tsv() const;
  std::string as_meta_csv() const;
};

struct PathLogEntry {
  std::string record_id;
  AsPath path;
  bool true_verdict = false;
  bool emitted_verdict = false;
};

struct GroundTruth {
  std::vector<PlantedCensor> censors;
  std::map<Asn, std::string> countries;
  std::vector<PathLogEntry> path_log;

  nlohmann::json to_json() const;
  static GroundTruth from_json(const nlohmann::json& j);
};

struct MeasurementStream {
  std::vector<MeasurementRecord> records;
  GroundTruth truth;
};

// Deterministic in params.seed. Throws std::invalid_argument when the
// parameters are invalid or the topology cannot supply path_pool_size
// distinct paths per pair.
SyntheticWorld generate_world(const SimParams& params);

MeasurementStream generate_measurements(const SyntheticWorld& world,
                                        const SimParams& params);

struct Scorecard {
  struct Counts {
    std::size_t true_positives = 0;
    std::size_t false_positives = 0;
    std::size_t planted = 0;
    std::optional<double> precision;  // nullopt: no Censor verdicts
    std::optional<double> recall;     // nullopt: nothing planted
  };
  Counts overall;
  std::map<AnomalyType, Counts> per_anomaly;
  // Planted censors that only reached PotentialCensor.
  std::vector<std::pair<Asn, AnomalyType>> potential_only;
  std::vector<std::pair<Asn, AnomalyType>> false_positives;
  std::vector<std::pair<Asn, AnomalyType>> missed;

  nlohmann::json to_json() const;
};

Scorecard evaluate(std::span<const CensorVerdict> verdicts, const GroundTruth& truth);

}  // namespace censorloc

#endif  // CENSORLOC_SIMULATE_H_
