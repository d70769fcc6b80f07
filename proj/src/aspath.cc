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

#include "censorloc/aspath.h"

#include <algorithm>
#include <optional>
#include <set>

namespace censorloc {
namespace {

using nlohmann::json;

struct SpecialRange {
  std::uint32_t network;
  int length;
};

constexpr std::uint32_t ip(unsigned a, unsigned b, unsigned c, unsigned d) {
  return (a << 24) | (b << 16) | (c << 8) | d;
}

constexpr SpecialRange kSpecialRanges[] = {
    {ip(0, 0, 0, 0), 8},       {ip(10, 0, 0, 0), 8},
    {ip(100, 64, 0, 0), 10},   {ip(127, 0, 0, 0), 8},
    {ip(169, 254, 0, 0), 16},  {ip(172, 16, 0, 0), 12},
    {ip(192, 168, 0, 0), 16},  {ip(224, 0, 0, 0), 3},
};

std::string describe(const HopMapping& m) {
  switch (m.kind) {
    case HopMapping::Kind::kMapped:
      return "mapped " + std::to_string(m.asns.front());
    case HopMapping::Kind::kAmbiguous: {
      std::string s = "ambiguous";
      for (Asn a : m.asns) s += " " + std::to_string(a);
      return s;
    }
    case HopMapping::Kind::kUnmapped:
      return "unmapped";
  }
  return "?";
}

InferenceFailure fail(FailureRule rule, std::string detail, json* trace) {
  if (trace) {
    (*trace)["result"] = {{"failure", to_string(rule)}, {"detail", detail}};
  }
  return {rule, std::move(detail)};
}

}  // namespace

std::string_view to_string(FailureRule rule) {
  switch (rule) {
    case FailureRule::kMappingImpossible:
      return "R1_MappingImpossible";
    case FailureRule::kTracerouteError:
      return "R2_TracerouteError";
    case FailureRule::kUnresolvableGap:
      return "R3_UnresolvableGap";
    case FailureRule::kMultipleAsPaths:
      return "R4_MultipleAsPaths";
  }
  return "?";
}

bool is_special_purpose(Ipv4 addr) {
  for (const auto& r : kSpecialRanges) {
    const std::uint32_t mask = ~std::uint32_t{0} << (32 - r.length);
    if ((addr.bits & mask) == r.network) return true;
  }
  return false;
}

HopMapping map_ip(const PrefixTable& table, Ipv4 addr) {
  if (is_special_purpose(addr)) return HopMapping::unmapped();
  const PrefixEntry* entry = table.longest_match(addr);
  if (!entry) return HopMapping::unmapped();
  if (entry->origins.size() == 1) return HopMapping::mapped(entry->origins.front());
  return HopMapping::ambiguous(entry->origins);
}

PathResult collapse_traceroute(const Traceroute& tr, const PrefixTable& table,
                               Asn vantage_asn, Asn dst_asn, json* trace) {
  if (trace) *trace = json::object();
  if (!tr.completed || tr.hops.empty()) {
    return fail(FailureRule::kTracerouteError,
                tr.completed ? "no hops" : "traceroute did not complete", trace);
  }

  // nullopt marks a gap: non-responsive, unmapped or multi-origin hop.
  std::vector<std::optional<Asn>> hops;
  json hop_trace = json::array();
  for (const Hop& hop : tr.hops) {
    std::optional<Asn> asn;
    std::string mapping = "non-responsive";
    if (hop.addr) {
      HopMapping m = map_ip(table, *hop.addr);
      mapping = describe(m);
      if (m.kind == HopMapping::Kind::kMapped) asn = m.asns.front();
    }
    hops.push_back(asn);
    if (trace) {
      hop_trace.push_back({{"ttl", hop.ttl},
                           {"addr", hop.addr ? hop.addr->str() : "*"},
                           {"mapping", mapping}});
    }
  }
  if (trace) (*trace)["hops"] = hop_trace;

  if (std::none_of(hops.begin(), hops.end(), [](const auto& h) { return h.has_value(); }))
    return fail(FailureRule::kMappingImpossible, "no hop maps to a single AS", trace);

  hops.insert(hops.begin(), vantage_asn);
  hops.push_back(dst_asn);

  std::vector<Asn> path;
  bool pending_gap = false;
  for (const auto& hop : hops) {
    if (!hop) {
      pending_gap = true;
      continue;
    }
    if (path.empty()) {
      path.push_back(*hop);
    } else if (path.back() != *hop) {
      if (pending_gap) {
        return fail(FailureRule::kUnresolvableGap,
                    "gap between AS" + std::to_string(path.back()) + " and AS" +
                        std::to_string(*hop),
                    trace);
      }
      path.push_back(*hop);
    }
    pending_gap = false;
  }
  if (trace) (*trace)["result"] = {{"path", path}};
  return AsPath{std::move(path)};
}

PathResult infer_as_path(const MeasurementRecord& record, const PrefixTable& table,
                         json* trace) {
  if (trace) *trace = {{"record_id", record.record_id}};
  const HopMapping dst = map_ip(table, record.dst_ip);
  if (dst.kind != HopMapping::Kind::kMapped) {
    return fail(FailureRule::kMappingImpossible,
                "destination " + record.dst_ip.str() + " " + describe(dst), trace);
  }
  const Asn dst_asn = dst.asns.front();
  if (trace) (*trace)["dst_asn"] = dst_asn;

  std::optional<InferenceFailure> first_failure;
  std::set<AsPath> distinct;
  json per_traceroute = json::array();
  for (const Traceroute& tr : record.traceroutes) {
    json step;
    PathResult r = collapse_traceroute(tr, table, record.vantage_asn, dst_asn,
                                       trace ? &step : nullptr);
    if (trace) per_traceroute.push_back(std::move(step));
    if (auto* path = std::get_if<AsPath>(&r)) {
      distinct.insert(std::move(*path));
    } else if (!first_failure) {
      first_failure = std::get<InferenceFailure>(std::move(r));
    }
  }
  if (trace) (*trace)["traceroutes"] = per_traceroute;

  if (distinct.empty()) {
    if (trace) {
      (*trace)["result"] = {{"failure", to_string(first_failure->rule)},
                            {"detail", first_failure->detail}};
    }
    return *first_failure;
  }
  if (distinct.size() > 1) {
    return fail(FailureRule::kMultipleAsPaths,
                std::to_string(distinct.size()) + " distinct AS paths", trace);
  }
  if (trace) (*trace)["result"] = {{"path", distinct.begin()->asns}};
  return *distinct.begin();
}

void EliminationSummary::add(const PathResult& result) {
  ++records;
  if (std::holds_alternative<AsPath>(result)) {
    ++paths;
  } else {
    ++failures[std::get<InferenceFailure>(result).rule];
  }
}

std::size_t EliminationSummary::total_failures() const {
  std::size_t n = 0;
  for (const auto& [_, count] : failures) n += count;
  return n;
}

json EliminationSummary::to_json() const {
  json rules = json::object();
  for (FailureRule rule : kAllFailureRules) {
    auto it = failures.find(rule);
    rules[std::string(to_string(rule))] = it == failures.end() ? 0 : it->second;
  }
  return json{{"records", records}, {"paths", paths}, {"eliminated", rules}};
}

std::vector<PathObservation> infer_observations(
    std::span<const MeasurementRecord> records, const PrefixTable& table,
    EliminationSummary* summary, std::vector<json>* traces) {
  std::vector<PathObservation> out;
  out.reserve(records.size());
  for (const auto& rec : records) {
    json trace;
    PathResult r = infer_as_path(rec, table, traces ? &trace : nullptr);
    if (summary) summary->add(r);
    if (traces) traces->push_back(std::move(trace));
    if (auto* path = std::get_if<AsPath>(&r)) {
      out.push_back({rec.record_id, rec.vantage_asn, path->asns.back(), rec.url,
                     rec.anomaly, rec.detected, rec.timestamp, std::move(*path)});
    }
  }
  return out;
}

}  // namespace censorloc
