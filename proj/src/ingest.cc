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

#include "censorloc/ingest.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace censorloc {
namespace {

using nlohmann::json;

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

void skip(IngestReport* report, std::size_t line, std::string reason,
          std::string detail) {
  if (report) report->skipped.push_back({line, std::move(reason), std::move(detail)});
}

std::optional<std::uint64_t> parse_uint(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::optional<std::vector<Asn>> parse_origins(std::string_view spec) {
  std::vector<Asn> origins;
  for (auto alt : split(spec, ',')) {
    for (auto part : split(alt, '_')) {
      auto v = parse_uint(part);
      if (!v || *v == 0 || *v > 0xffffffffULL) return std::nullopt;
      origins.push_back(static_cast<Asn>(*v));
    }
  }
  std::sort(origins.begin(), origins.end());
  origins.erase(std::unique(origins.begin(), origins.end()), origins.end());
  if (origins.empty()) return std::nullopt;
  return origins;
}

std::uint32_t mask_for(int length) {
  return length == 0 ? 0u : ~std::uint32_t{0} << (32 - length);
}

// Splits one CSV row with optional double-quoted fields.
std::optional<std::vector<std::string>> split_csv(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == '"' && fields.back().empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) return std::nullopt;
  return fields;
}

}  // namespace

std::map<std::string, std::size_t> IngestReport::reason_counts() const {
  std::map<std::string, std::size_t> counts;
  for (const auto& s : skipped) ++counts[s.reason];
  return counts;
}

json IngestReport::summary_json() const {
  json reasons = json::object();
  for (const auto& [reason, n] : reason_counts()) reasons[reason] = n;
  return json{{"records_ok", ok},
              {"records_skipped", skipped.size()},
              {"skip_reasons", reasons}};
}

std::vector<MeasurementRecord> parse_measurements(std::istream& in,
                                                  IngestReport* report,
                                                  const AnalysisPeriod& period) {
  std::vector<MeasurementRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (is_blank(line)) {
      skip(report, line_no, "empty line", "");
      continue;
    }
    json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) {
      skip(report, line_no, "invalid json", "");
      continue;
    }
    try {
      auto rec = j.get<MeasurementRecord>();
      if (!period.contains(rec.timestamp)) {
        skip(report, line_no, "timestamp outside analysis period",
             format_timestamp(rec.timestamp));
        continue;
      }
      records.push_back(std::move(rec));
    } catch (const FieldError& e) {
      skip(report, line_no, e.reason(), e.what());
    } catch (const json::exception& e) {
      skip(report, line_no, "invalid field type", e.what());
    }
  }
  if (report) {
    report->lines = line_no;
    report->ok = records.size();
  }
  if (records.empty()) {
    throw InputError("no valid measurement records in " +
                     std::to_string(line_no) + " input lines");
  }
  return records;
}

std::string to_jsonl(const MeasurementRecord& rec) { return json(rec).dump(); }

void PrefixTable::insert(PrefixEntry entry) {
  entry.prefix.bits &= mask_for(entry.length);
  auto& bucket = by_length_[entry.length];
  auto [it, inserted] = bucket.insert_or_assign(entry.prefix.bits, entry);
  (void)it;
  if (inserted) ++size_;
}

const PrefixEntry* PrefixTable::longest_match(Ipv4 ip) const {
  for (int len = 32; len >= 0; --len) {
    const auto& bucket = by_length_[len];
    if (bucket.empty()) continue;
    auto it = bucket.find(ip.bits & mask_for(len));
    if (it != bucket.end()) return &it->second;
  }
  return nullptr;
}

std::vector<PrefixEntry> PrefixTable::entries() const {
  std::vector<PrefixEntry> out;
  out.reserve(size_);
  for (const auto& bucket : by_length_) {
    for (const auto& [_, e] : bucket) out.push_back(e);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.prefix, a.length) < std::tie(b.prefix, b.length);
  });
  return out;
}

PrefixTable parse_pfx2as(std::istream& in, IngestReport* report) {
  PrefixTable table;
  std::string line;
  std::size_t line_no = 0, ok = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (is_blank(line)) {
      skip(report, line_no, "empty line", "");
      continue;
    }
    auto fields = split(line, '\t');
    if (fields.size() != 3) {
      skip(report, line_no, "wrong field count", line);
      continue;
    }
    auto prefix = Ipv4::parse(fields[0]);
    if (!prefix) {
      skip(report, line_no, "invalid prefix", std::string(fields[0]));
      continue;
    }
    auto length = parse_uint(fields[1]);
    if (!length || *length > 32) {
      skip(report, line_no, "invalid prefix length", std::string(fields[1]));
      continue;
    }
    auto origins = parse_origins(fields[2]);
    if (!origins) {
      skip(report, line_no, "invalid origin", std::string(fields[2]));
      continue;
    }
    table.insert({*prefix, static_cast<int>(*length), std::move(*origins)});
    ++ok;
  }
  if (report) {
    report->lines = line_no;
    report->ok = ok;
  }
  if (table.empty()) throw InputError("pfx2as table is empty");
  return table;
}

AsRegistry parse_as_metadata(std::istream& in, IngestReport* report) {
  AsRegistry registry;
  std::string line;
  std::size_t line_no = 0, ok = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (!header_seen) {
      if (line != "asn,country,name")
        throw InputError("AS metadata: missing header \"asn,country,name\"");
      header_seen = true;
      continue;
    }
    if (is_blank(line)) {
      skip(report, line_no, "empty line", "");
      continue;
    }
    auto fields = split_csv(line);
    if (!fields || fields->size() != 3) {
      skip(report, line_no, "wrong field count", line);
      continue;
    }
    auto asn = parse_uint((*fields)[0]);
    if (!asn || *asn == 0 || *asn > 0xffffffffULL) {
      skip(report, line_no, "invalid asn", (*fields)[0]);
      continue;
    }
    const std::string& country = (*fields)[1];
    if (country.size() != 2 || !std::isupper(static_cast<unsigned char>(country[0])) ||
        !std::isupper(static_cast<unsigned char>(country[1]))) {
      skip(report, line_no, "country code not alpha-2", country);
      continue;
    }
    auto key = static_cast<Asn>(*asn);
    if (registry.find(key) && report) {
      report->warnings.push_back("duplicate asn " + std::to_string(key) +
                                 " on line " + std::to_string(line_no) +
                                 "; last entry wins");
    }
    registry.set(key, {country, (*fields)[2]});
    ++ok;
  }
  if (!header_seen)
    throw InputError("AS metadata: missing header \"asn,country,name\"");
  if (report) {
    report->lines = line_no;
    report->ok = ok;
  }
  return registry;
}

std::string window_id(Timestamp t, TimeGranularity granularity) {
  using namespace std::chrono;
  const sys_days day = floor<days>(t);
  const year_month_day ymd{day};
  char buf[32];
  switch (granularity) {
    case TimeGranularity::kDay:
      std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                    static_cast<unsigned>(ymd.month()),
                    static_cast<unsigned>(ymd.day()));
      break;
    case TimeGranularity::kWeek: {
      // The ISO week belongs to the year holding its Thursday.
      const unsigned iso_weekday = weekday{day}.iso_encoding();  // Mon=1..Sun=7
      const sys_days thursday = day + days{4 - static_cast<int>(iso_weekday)};
      const year iso_year = year_month_day{thursday}.year();
      const sys_days jan1 = sys_days{iso_year / January / 1};
      const int week = static_cast<int>((thursday - jan1).count()) / 7 + 1;
      std::snprintf(buf, sizeof buf, "%04d-W%02d", static_cast<int>(iso_year), week);
      break;
    }
    case TimeGranularity::kMonth:
      std::snprintf(buf, sizeof buf, "%04d-%02u", static_cast<int>(ymd.year()),
                    static_cast<unsigned>(ymd.month()));
      break;
    case TimeGranularity::kYear:
      std::snprintf(buf, sizeof buf, "%04d", static_cast<int>(ymd.year()));
      break;
  }
  return buf;
}

}  // namespace censorloc
