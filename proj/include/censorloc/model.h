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

// Shared domain types for the censor localization pipeline.
//
// Everything here is a plain value type: comparable, copyable and
// serializable through nlohmann::json. Containers that carry sets (clause
// literals, CNF variables) are kept as sorted vectors so that every report
// derived from them is byte-stable.

#ifndef CENSORLOC_MODEL_H_
#define CENSORLOC_MODEL_H_

#include <array>
#include <chrono>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace censorloc {

using Asn = std::uint32_t;
using Timestamp = std::chrono::sys_seconds;

// Raised for malformed or unusable external input. The CLI maps it to exit
// code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A record-level validation failure. `reason()` is a short categorical label
// suitable for tallying; what() also carries the offending detail.
class FieldError : public InputError {
 public:
  FieldError(std::string reason, const std::string& detail)
      : InputError(detail.empty() ? reason : reason + ": " + detail),
        reason_(std::move(reason)) {}

  const std::string& reason() const { return reason_; }

 private:
  std::string reason_;
};

enum class AnomalyType { kDns, kSeqno, kTtl, kReset, kBlockpage };

inline constexpr std::array<AnomalyType, 5> kAllAnomalies = {
    AnomalyType::kDns, AnomalyType::kSeqno, AnomalyType::kTtl,
    AnomalyType::kReset, AnomalyType::kBlockpage};

std::string_view to_string(AnomalyType anomaly);
std::optional<AnomalyType> parse_anomaly(std::string_view token);

enum class TimeGranularity { kDay, kWeek, kMonth, kYear };

inline constexpr std::array<TimeGranularity, 4> kAllGranularities = {
    TimeGranularity::kDay, TimeGranularity::kWeek, TimeGranularity::kMonth,
    TimeGranularity::kYear};

std::string_view to_string(TimeGranularity granularity);
std::optional<TimeGranularity> parse_granularity(std::string_view token);

// IPv4 address in host byte order.
struct Ipv4 {
  std::uint32_t bits = 0;

  static std::optional<Ipv4> parse(std::string_view text);
  std::string str() const;

  auto operator<=>(const Ipv4&) const = default;
};

// "YYYY-MM-DDThh:mm:ssZ", UTC, seconds precision.
std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp t);

struct Hop {
  std::optional<Ipv4> addr;  // nullopt: non-responsive ("*")
  int ttl = 0;

  bool operator==(const Hop&) const = default;
};

struct Traceroute {
  bool completed = false;
  std::vector<Hop> hops;

  bool operator==(const Traceroute&) const = default;
};

struct MeasurementRecord {
  std::string record_id;
  Asn vantage_asn = 0;
  std::string url;
  Ipv4 dst_ip;
  AnomalyType anomaly = AnomalyType::kDns;
  bool detected = false;
  Timestamp timestamp{};
  std::array<Traceroute, 3> traceroutes;

  bool operator==(const MeasurementRecord&) const = default;
};

// AS-level path from the vantage AS to the destination AS. Never contains
// two equal consecutive ASNs.
struct AsPath {
  std::vector<Asn> asns;

  auto operator<=>(const AsPath&) const = default;
};

std::string to_string(const AsPath& path);

struct BucketKey {
  AnomalyType anomaly = AnomalyType::kDns;
  std::string url;
  TimeGranularity granularity = TimeGranularity::kDay;
  std::string window_id;

  auto operator<=>(const BucketKey&) const = default;
};

std::string to_string(const BucketKey& key);

// One observation: the distinct ASes of a path together with whether the
// anomaly was seen on it.
struct Clause {
  std::vector<Asn> literal_asns;  // sorted, unique, non-empty
  bool truth = false;

  auto operator<=>(const Clause&) const = default;
};

struct SourcePath {
  AsPath path;
  bool truth = false;
  std::string record_id;

  bool operator==(const SourcePath&) const = default;
};

struct CnfInstance {
  BucketKey key;
  std::vector<Asn> variables;  // sorted ascending
  std::vector<Clause> clauses;  // sorted, deduplicated
  std::vector<SourcePath> source_paths;

  bool operator==(const CnfInstance&) const = default;
};

enum class SolveStatus { kUnsat, kUnique, kMultiple };
enum class BackboneValue { kForcedTrue, kForcedFalse, kFree };

std::string_view to_string(SolveStatus status);
std::string_view to_string(BackboneValue value);

struct SolutionSummary {
  BucketKey key;
  SolveStatus status = SolveStatus::kUnsat;
  int model_count_capped = 0;
  std::map<Asn, BackboneValue> backbone;

  bool operator==(const SolutionSummary&) const = default;
};

enum class CensorClass { kCensor, kPotentialCensor, kNonCensor };

std::string_view to_string(CensorClass cls);

struct CensorVerdict {
  Asn asn = 0;
  CensorClass cls = CensorClass::kNonCensor;
  AnomalyType anomaly = AnomalyType::kDns;
  std::vector<BucketKey> witnesses;

  bool operator==(const CensorVerdict&) const = default;
};

struct LeakageEdge {
  Asn censor_asn = 0;
  Asn victim_asn = 0;
  std::string censor_country;
  std::string victim_country;
  AnomalyType anomaly = AnomalyType::kDns;
  BucketKey witness_key;
  std::string witness_record_id;

  bool cross_country() const { return censor_country != victim_country; }
  bool operator==(const LeakageEdge&) const = default;
};

// A measurement whose traceroutes resolved to a single AS path.
struct PathObservation {
  std::string record_id;
  Asn vantage_asn = 0;
  Asn dst_asn = 0;
  std::string url;
  AnomalyType anomaly = AnomalyType::kDns;
  bool detected = false;
  Timestamp timestamp{};
  AsPath path;

  bool operator==(const PathObservation&) const = default;
};

// JSON mappings. Enumerations serialize as their lowercase token.
void to_json(nlohmann::json& j, const Hop& hop);
void from_json(const nlohmann::json& j, Hop& hop);
void to_json(nlohmann::json& j, const Traceroute& tr);
void from_json(const nlohmann::json& j, Traceroute& tr);
void to_json(nlohmann::json& j, const MeasurementRecord& rec);
void from_json(const nlohmann::json& j, MeasurementRecord& rec);
void to_json(nlohmann::json& j, const AsPath& path);
void from_json(const nlohmann::json& j, AsPath& path);
void to_json(nlohmann::json& j, const BucketKey& key);
void from_json(const nlohmann::json& j, BucketKey& key);
void to_json(nlohmann::json& j, const Clause& clause);
void from_json(const nlohmann::json& j, Clause& clause);
void to_json(nlohmann::json& j, const SourcePath& sp);
void from_json(const nlohmann::json& j, SourcePath& sp);
void to_json(nlohmann::json& j, const CnfInstance& cnf);
void from_json(const nlohmann::json& j, CnfInstance& cnf);
void to_json(nlohmann::json& j, const SolutionSummary& s);
void from_json(const nlohmann::json& j, SolutionSummary& s);
void to_json(nlohmann::json& j, const CensorVerdict& v);
void from_json(const nlohmann::json& j, CensorVerdict& v);
void to_json(nlohmann::json& j, const LeakageEdge& e);
void from_json(const nlohmann::json& j, LeakageEdge& e);

}  // namespace censorloc

#endif  // CENSORLOC_MODEL_H_
