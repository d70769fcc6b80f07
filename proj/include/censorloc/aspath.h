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

// Conversion of IP-level traceroutes to AS-level paths.
//
// A record carries three traceroutes. Each one is mapped hop by hop through
// the prefix table and collapsed to an AS sequence anchored at the vantage
// and destination ASes. Inconclusive records are eliminated under one of
// four rules:
//
//   R1  no hop (or the destination) maps to a single AS
//   R2  the traceroute did not complete
//   R3  a gap (non-responsive, unmapped or multi-origin hops) sits between
//       two different ASes
//   R4  the three traceroutes disagree on the AS path

#ifndef CENSORLOC_ASPATH_H_
#define CENSORLOC_ASPATH_H_

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "censorloc/ingest.h"
#include "censorloc/model.h"
#include "json.hpp"

namespace censorloc {

struct HopMapping {
  enum class Kind { kMapped, kAmbiguous, kUnmapped };

  Kind kind = Kind::kUnmapped;
  std::vector<Asn> asns;  // one for kMapped, several for kAmbiguous

  static HopMapping mapped(Asn asn) { return {Kind::kMapped, {asn}}; }
  static HopMapping ambiguous(std::vector<Asn> asns) {
    return {Kind::kAmbiguous, std::move(asns)};
  }
  static HopMapping unmapped() { return {Kind::kUnmapped, {}}; }

  bool operator==(const HopMapping&) const = default;
};

enum class FailureRule {
  kMappingImpossible,  // R1
  kTracerouteError,    // R2
  kUnresolvableGap,    // R3
  kMultipleAsPaths,    // R4
};

inline constexpr std::array<FailureRule, 4> kAllFailureRules = {
    FailureRule::kMappingImpossible, FailureRule::kTracerouteError,
    FailureRule::kUnresolvableGap, FailureRule::kMultipleAsPaths};

std::string_view to_string(FailureRule rule);

struct InferenceFailure {
  FailureRule rule = FailureRule::kMappingImpossible;
  std::string detail;
};

using PathResult = std::variant<AsPath, InferenceFailure>;

// RFC 1918, loopback, link-local, "this network", CGN shared space and
// multicast/reserved space never map to an AS.
bool is_special_purpose(Ipv4 ip);

HopMapping map_ip(const PrefixTable& table, Ipv4 ip);

// `trace`, when given, receives a JSON description of each step.
PathResult collapse_traceroute(const Traceroute& tr, const PrefixTable& table,
                               Asn vantage_asn, Asn dst_asn,
                               nlohmann::json* trace = nullptr);

PathResult infer_as_path(const MeasurementRecord& record,
                         const PrefixTable& table,
                         nlohmann::json* trace = nullptr);

// Per-rule elimination counts. paths + sum(failures) == records.
struct EliminationSummary {
  std::size_t records = 0;
  std::size_t paths = 0;
  std::map<FailureRule, std::size_t> failures;

  void add(const PathResult& result);
  std::size_t total_failures() const;
  nlohmann::json to_json() const;
};

// Runs inference over all records, keeping successes as observations in
// input order.
std::vector<PathObservation> infer_observations(
    std::span<const MeasurementRecord> records, const PrefixTable& table,
    EliminationSummary* summary = nullptr,
    std::vector<nlohmann::json>* traces = nullptr);

}  // namespace censorloc

#endif  // CENSORLOC_ASPATH_H_
