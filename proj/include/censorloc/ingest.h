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

// Parsers for the three external inputs (measurement JSONL, pfx2as TSV and
// AS metadata CSV) and the calendar window labels used for bucketing.

#ifndef CENSORLOC_INGEST_H_
#define CENSORLOC_INGEST_H_

#include <array>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "censorloc/model.h"
#include "json.hpp"

namespace censorloc {

struct SkipEntry {
  std::size_t line = 0;  // 1-based
  std::string reason;
  std::string detail;
};

// Accounting for one parsed input. Every input line ends up either in `ok`
// or in `skipped`.
struct IngestReport {
  std::size_t lines = 0;
  std::size_t ok = 0;
  std::vector<SkipEntry> skipped;
  std::vector<std::string> warnings;

  std::map<std::string, std::size_t> reason_counts() const;
  // {records_ok, records_skipped, skip_reasons}
  nlohmann::json summary_json() const;
};

// Optional closed interval of accepted measurement timestamps.
struct AnalysisPeriod {
  std::optional<Timestamp> begin;
  std::optional<Timestamp> end;

  bool contains(Timestamp t) const {
    return (!begin || t >= *begin) && (!end || t <= *end);
  }
};

// One JSON object per line. Malformed lines are skipped and reported; throws
// InputError when no line yields a record.
std::vector<MeasurementRecord> parse_measurements(
    std::istream& in, IngestReport* report = nullptr,
    const AnalysisPeriod& period = {});

// Single-line JSON encoding of a record, the inverse of parse_measurements.
std::string to_jsonl(const MeasurementRecord& rec);

struct PrefixEntry {
  Ipv4 prefix;  // network address, host bits cleared
  int length = 0;
  std::vector<Asn> origins;  // sorted, unique, non-empty

  bool operator==(const PrefixEntry&) const = default;
};

// Longest-prefix-match table keyed by (network, length).
class PrefixTable {
 public:
  // Replaces any entry with the same (prefix, length).
  void insert(PrefixEntry entry);
  const PrefixEntry* longest_match(Ipv4 ip) const;

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  std::vector<PrefixEntry> entries() const;

 private:
  std::array<std::unordered_map<std::uint32_t, PrefixEntry>, 33> by_length_;
  std::size_t size_ = 0;
};

// "<prefix>\t<length>\t<origin-spec>" lines. Origin specs may join several
// ASNs with '_' (AS set) or ',' (alternatives). Throws InputError if the
// resulting table is empty.
PrefixTable parse_pfx2as(std::istream& in, IngestReport* report = nullptr);

struct AsInfo {
  std::string country;  // ISO 3166-1 alpha-2
  std::string name;

  bool operator==(const AsInfo&) const = default;
};

class AsRegistry {
 public:
  void set(Asn asn, AsInfo info) { entries_[asn] = std::move(info); }
  const AsInfo* find(Asn asn) const {
    auto it = entries_.find(asn);
    return it == entries_.end() ? nullptr : &it->second;
  }
  std::size_t size() const { return entries_.size(); }
  const std::map<Asn, AsInfo>& entries() const { return entries_; }

 private:
  std::map<Asn, AsInfo> entries_;
};

// CSV with header "asn,country,name". Throws InputError on a missing header.
AsRegistry parse_as_metadata(std::istream& in, IngestReport* report = nullptr);

// Day "YYYY-MM-DD", Week "GGGG-Www" (ISO 8601), Month "YYYY-MM", Year "YYYY".
std::string window_id(Timestamp t, TimeGranularity granularity);

}  // namespace censorloc

#endif  // CENSORLOC_INGEST_H_
