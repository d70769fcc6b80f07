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

#include "censorloc/model.h"

#include <arpa/inet.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <set>

namespace censorloc {
namespace {

using nlohmann::json;

template <typename Enum, std::size_t N>
std::optional<Enum> lookup_token(
    const std::array<std::pair<Enum, std::string_view>, N>& table,
    std::string_view token) {
  for (const auto& [value, name] : table) {
    if (name == token) return value;
  }
  return std::nullopt;
}

template <typename Enum, std::size_t N>
std::string_view token_of(
    const std::array<std::pair<Enum, std::string_view>, N>& table,
    Enum value) {
  for (const auto& [v, name] : table) {
    if (v == value) return name;
  }
  return "?";
}

constexpr std::array<std::pair<AnomalyType, std::string_view>, 5> kAnomalyNames =
    {{{AnomalyType::kDns, "dns"},
      {AnomalyType::kSeqno, "seqno"},
      {AnomalyType::kTtl, "ttl"},
      {AnomalyType::kReset, "reset"},
      {AnomalyType::kBlockpage, "blockpage"}}};

constexpr std::array<std::pair<TimeGranularity, std::string_view>, 4>
    kGranularityNames = {{{TimeGranularity::kDay, "day"},
                          {TimeGranularity::kWeek, "week"},
                          {TimeGranularity::kMonth, "month"},
                          {TimeGranularity::kYear, "year"}}};

constexpr std::array<std::pair<SolveStatus, std::string_view>, 3> kStatusNames =
    {{{SolveStatus::kUnsat, "unsat"},
      {SolveStatus::kUnique, "unique"},
      {SolveStatus::kMultiple, "multiple"}}};

constexpr std::array<std::pair<BackboneValue, std::string_view>, 3>
    kBackboneNames = {{{BackboneValue::kForcedTrue, "forced_true"},
                       {BackboneValue::kForcedFalse, "forced_false"},
                       {BackboneValue::kFree, "free"}}};

constexpr std::array<std::pair<CensorClass, std::string_view>, 3> kClassNames =
    {{{CensorClass::kCensor, "censor"},
      {CensorClass::kPotentialCensor, "potential_censor"},
      {CensorClass::kNonCensor, "non_censor"}}};

template <typename Enum, std::size_t N>
Enum enum_from_json(const json& j,
                    const std::array<std::pair<Enum, std::string_view>, N>& t,
                    const char* what) {
  if (!j.is_string()) throw FieldError("invalid field type", what);
  auto v = lookup_token(t, j.get_ref<const std::string&>());
  if (!v) throw FieldError(std::string("unknown ") + what, j.get<std::string>());
  return *v;
}

bool parse_digits(std::string_view s, int& out) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

bool is_absolute_url(std::string_view url) {
  auto sep = url.find("://");
  if (sep == std::string_view::npos || sep == 0) return false;
  if (!std::isalpha(static_cast<unsigned char>(url[0]))) return false;
  for (char c : url.substr(0, sep)) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' &&
        c != '.')
      return false;
  }
  return url.size() > sep + 3;
}

const json& required(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw FieldError("missing key", key);
  return *it;
}

}  // namespace

std::string_view to_string(AnomalyType anomaly) {
  return token_of(kAnomalyNames, anomaly);
}

std::optional<AnomalyType> parse_anomaly(std::string_view token) {
  return lookup_token(kAnomalyNames, token);
}

std::string_view to_string(TimeGranularity granularity) {
  return token_of(kGranularityNames, granularity);
}

std::optional<TimeGranularity> parse_granularity(std::string_view token) {
  return lookup_token(kGranularityNames, token);
}

std::string_view to_string(SolveStatus status) {
  return token_of(kStatusNames, status);
}

std::string_view to_string(BackboneValue value) {
  return token_of(kBackboneNames, value);
}

std::string_view to_string(CensorClass cls) { return token_of(kClassNames, cls); }

std::optional<Ipv4> Ipv4::parse(std::string_view text) {
  if (text.size() > 15) return std::nullopt;
  std::string buf(text);
  in_addr addr{};
  if (inet_pton(AF_INET, buf.c_str(), &addr) != 1) return std::nullopt;
  return Ipv4{ntohl(addr.s_addr)};
}

std::string Ipv4::str() const {
  return std::to_string(bits >> 24) + "." + std::to_string((bits >> 16) & 0xff) +
         "." + std::to_string((bits >> 8) & 0xff) + "." +
         std::to_string(bits & 0xff);
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  // YYYY-MM-DDThh:mm:ssZ
  if (text.size() != 20 || text[4] != '-' || text[7] != '-' ||
      text[10] != 'T' || text[13] != ':' || text[16] != ':' || text[19] != 'Z')
    return std::nullopt;
  int y, mo, d, h, mi, s;
  if (!parse_digits(text.substr(0, 4), y) ||
      !parse_digits(text.substr(5, 2), mo) ||
      !parse_digits(text.substr(8, 2), d) ||
      !parse_digits(text.substr(11, 2), h) ||
      !parse_digits(text.substr(14, 2), mi) ||
      !parse_digits(text.substr(17, 2), s))
    return std::nullopt;
  using namespace std::chrono;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                     day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 59) return std::nullopt;
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  auto day_start = floor<days>(t);
  year_month_day ymd{day_start};
  hh_mm_ss<seconds> tod{t - day_start};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()),
                static_cast<int>(tod.hours().count()),
                static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()));
  return buf;
}

std::string to_string(const AsPath& path) {
  std::string out;
  for (std::size_t i = 0; i < path.asns.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(path.asns[i]);
  }
  return out;
}

std::string to_string(const BucketKey& key) {
  return std::string(to_string(key.anomaly)) + "|" + key.url + "|" +
         std::string(to_string(key.granularity)) + "|" + key.window_id;
}

void to_json(json& j, const Hop& hop) {
  j = json{{"ttl", hop.ttl}, {"addr", hop.addr ? hop.addr->str() : "*"}};
}

void from_json(const json& j, Hop& hop) {
  if (!j.is_object() || j.size() != 2) throw FieldError("invalid hop", j.dump());
  const json& ttl = required(j, "ttl");
  const json& addr = required(j, "addr");
  if (!ttl.is_number_integer() || ttl.get<long long>() < 1 ||
      ttl.get<long long>() > 255)
    throw FieldError("invalid hop", "ttl " + ttl.dump());
  if (!addr.is_string()) throw FieldError("invalid hop", "addr " + addr.dump());
  hop.ttl = ttl.get<int>();
  const auto& text = addr.get_ref<const std::string&>();
  if (text == "*") {
    hop.addr.reset();
  } else {
    hop.addr = Ipv4::parse(text);
    if (!hop.addr) throw FieldError("invalid hop", "addr " + text);
  }
}

void to_json(json& j, const Traceroute& tr) {
  j = json{{"completed", tr.completed}, {"hops", tr.hops}};
}

void from_json(const json& j, Traceroute& tr) {
  if (!j.is_object() || j.size() != 2)
    throw FieldError("invalid traceroute", "expected {completed, hops}");
  const json& completed = required(j, "completed");
  const json& hops = required(j, "hops");
  if (!completed.is_boolean() || !hops.is_array())
    throw FieldError("invalid traceroute", "field types");
  tr.completed = completed.get<bool>();
  tr.hops.clear();
  for (const auto& h : hops) tr.hops.push_back(h.get<Hop>());
  for (std::size_t i = 1; i < tr.hops.size(); ++i) {
    if (tr.hops[i].ttl <= tr.hops[i - 1].ttl)
      throw FieldError("hop ttl not increasing",
                       std::to_string(tr.hops[i].ttl));
  }
  if (tr.hops.empty() && tr.completed)
    throw FieldError("completed traceroute without hops", "");
}

void to_json(json& j, const MeasurementRecord& rec) {
  j = json{{"record_id", rec.record_id},
           {"vantage_asn", rec.vantage_asn},
           {"url", rec.url},
           {"dst_ip", rec.dst_ip.str()},
           {"anomaly", to_string(rec.anomaly)},
           {"detected", rec.detected},
           {"timestamp", format_timestamp(rec.timestamp)},
           {"traceroutes", rec.traceroutes}};
}

void from_json(const json& j, MeasurementRecord& rec) {
  static const std::set<std::string> kKeys = {
      "record_id", "vantage_asn", "url",       "dst_ip",
      "anomaly",   "detected",    "timestamp", "traceroutes"};
  if (!j.is_object()) throw FieldError("not an object", "");
  for (const auto& [key, _] : j.items()) {
    if (!kKeys.contains(key)) throw FieldError("unexpected key", key);
  }
  const json& id = required(j, "record_id");
  const json& vantage = required(j, "vantage_asn");
  const json& url = required(j, "url");
  const json& dst = required(j, "dst_ip");
  const json& anomaly = required(j, "anomaly");
  const json& detected = required(j, "detected");
  const json& ts = required(j, "timestamp");
  const json& trs = required(j, "traceroutes");

  if (!id.is_string()) throw FieldError("invalid field type", "record_id");
  rec.record_id = id.get<std::string>();

  if (!vantage.is_number_integer() || vantage.get<long long>() < 1 ||
      vantage.get<long long>() > 0xffffffffLL)
    throw FieldError("invalid vantage_asn", vantage.dump());
  rec.vantage_asn = static_cast<Asn>(vantage.get<long long>());

  if (!url.is_string() || !is_absolute_url(url.get_ref<const std::string&>()))
    throw FieldError("invalid url", url.dump());
  rec.url = url.get<std::string>();

  std::optional<Ipv4> ip;
  if (dst.is_string()) ip = Ipv4::parse(dst.get_ref<const std::string&>());
  if (!ip) throw FieldError("invalid dst_ip", dst.dump());
  rec.dst_ip = *ip;

  if (!anomaly.is_string()) throw FieldError("invalid field type", "anomaly");
  auto a = parse_anomaly(anomaly.get_ref<const std::string&>());
  if (!a) throw FieldError("unknown anomaly type", anomaly.get<std::string>());
  rec.anomaly = *a;

  if (!detected.is_boolean()) throw FieldError("invalid field type", "detected");
  rec.detected = detected.get<bool>();

  std::optional<Timestamp> t;
  if (ts.is_string()) t = parse_timestamp(ts.get_ref<const std::string&>());
  if (!t) throw FieldError("invalid timestamp", ts.dump());
  rec.timestamp = *t;

  if (!trs.is_array()) throw FieldError("invalid field type", "traceroutes");
  if (trs.size() != 3)
    throw FieldError("traceroute count ≠ 3", std::to_string(trs.size()));
  for (std::size_t i = 0; i < 3; ++i) rec.traceroutes[i] = trs[i].get<Traceroute>();
}

void to_json(json& j, const AsPath& path) { j = path.asns; }
void from_json(const json& j, AsPath& path) { path.asns = j.get<std::vector<Asn>>(); }

void to_json(json& j, const BucketKey& key) {
  j = json{{"anomaly", to_string(key.anomaly)},
           {"url", key.url},
           {"granularity", to_string(key.granularity)},
           {"window", key.window_id}};
}

void from_json(const json& j, BucketKey& key) {
  key.anomaly = enum_from_json(j.at("anomaly"), kAnomalyNames, "anomaly type");
  key.url = j.at("url").get<std::string>();
  key.granularity =
      enum_from_json(j.at("granularity"), kGranularityNames, "granularity");
  key.window_id = j.at("window").get<std::string>();
}

void to_json(json& j, const Clause& clause) {
  j = json{{"asns", clause.literal_asns}, {"truth", clause.truth}};
}

void from_json(const json& j, Clause& clause) {
  clause.literal_asns = j.at("asns").get<std::vector<Asn>>();
  clause.truth = j.at("truth").get<bool>();
}

void to_json(json& j, const SourcePath& sp) {
  j = json{{"path", sp.path}, {"truth", sp.truth}, {"record_id", sp.record_id}};
}

void from_json(const json& j, SourcePath& sp) {
  sp.path = j.at("path").get<AsPath>();
  sp.truth = j.at("truth").get<bool>();
  sp.record_id = j.at("record_id").get<std::string>();
}

void to_json(json& j, const CnfInstance& cnf) {
  j = json{{"key", cnf.key},
           {"variables", cnf.variables},
           {"clauses", cnf.clauses},
           {"source_paths", cnf.source_paths}};
}

void from_json(const json& j, CnfInstance& cnf) {
  cnf.key = j.at("key").get<BucketKey>();
  cnf.variables = j.at("variables").get<std::vector<Asn>>();
  cnf.clauses = j.at("clauses").get<std::vector<Clause>>();
  cnf.source_paths = j.at("source_paths").get<std::vector<SourcePath>>();
}

void to_json(json& j, const SolutionSummary& s) {
  json backbone = json::object();
  for (const auto& [asn, value] : s.backbone)
    backbone[std::to_string(asn)] = to_string(value);
  j = json{{"key", s.key},
           {"status", to_string(s.status)},
           {"count_capped", s.model_count_capped},
           {"backbone", backbone}};
}

void from_json(const json& j, SolutionSummary& s) {
  s.key = j.at("key").get<BucketKey>();
  s.status = enum_from_json(j.at("status"), kStatusNames, "status");
  s.model_count_capped = j.at("count_capped").get<int>();
  s.backbone.clear();
  for (const auto& [asn, value] : j.at("backbone").items()) {
    s.backbone[static_cast<Asn>(std::stoul(asn))] =
        enum_from_json(value, kBackboneNames, "backbone value");
  }
}

void to_json(json& j, const CensorVerdict& v) {
  j = json{{"asn", v.asn},
           {"class", to_string(v.cls)},
           {"anomaly", to_string(v.anomaly)},
           {"witnesses", v.witnesses}};
}

void from_json(const json& j, CensorVerdict& v) {
  v.asn = j.at("asn").get<Asn>();
  v.cls = enum_from_json(j.at("class"), kClassNames, "class");
  v.anomaly = enum_from_json(j.at("anomaly"), kAnomalyNames, "anomaly type");
  v.witnesses = j.at("witnesses").get<std::vector<BucketKey>>();
}

void to_json(json& j, const LeakageEdge& e) {
  j = json{{"censor_asn", e.censor_asn},
           {"victim_asn", e.victim_asn},
           {"censor_country", e.censor_country},
           {"victim_country", e.victim_country},
           {"anomaly", to_string(e.anomaly)},
           {"cross_country", e.cross_country()},
           {"witness_key", e.witness_key},
           {"witness_record_id", e.witness_record_id}};
}

void from_json(const json& j, LeakageEdge& e) {
  e.censor_asn = j.at("censor_asn").get<Asn>();
  e.victim_asn = j.at("victim_asn").get<Asn>();
  e.censor_country = j.at("censor_country").get<std::string>();
  e.victim_country = j.at("victim_country").get<std::string>();
  e.anomaly = enum_from_json(j.at("anomaly"), kAnomalyNames, "anomaly type");
  e.witness_key = j.at("witness_key").get<BucketKey>();
  e.witness_record_id = j.at("witness_record_id").get<std::string>();
}

}  // namespace censorloc
