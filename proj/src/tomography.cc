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

#include "censorloc/tomography.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <set>

#include "censorloc/ingest.h"

namespace censorloc {

Clause build_clause(const AsPath& path, bool detected) {
  Clause clause{path.asns, detected};
  std::sort(clause.literal_asns.begin(), clause.literal_asns.end());
  clause.literal_asns.erase(
      std::unique(clause.literal_asns.begin(), clause.literal_asns.end()),
      clause.literal_asns.end());
  return clause;
}

BucketMap bucket(std::span<const PathObservation> observations,
                 TimeGranularity granularity, bool split_by_url) {
  std::vector<const PathObservation*> ordered;
  ordered.reserve(observations.size());
  for (const auto& obs : observations) ordered.push_back(&obs);
  std::stable_sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) {
    return a->timestamp < b->timestamp;
  });

  BucketMap buckets;
  for (const PathObservation* obs : ordered) {
    BucketKey key{obs->anomaly, split_by_url ? obs->url : std::string(kAllUrls),
                  granularity, window_id(obs->timestamp, granularity)};
    buckets[std::move(key)].push_back(*obs);
  }
  return buckets;
}

CnfInstance build_cnf(const BucketKey& key,
                      std::span<const PathObservation> entries) {
  CnfInstance cnf;
  cnf.key = key;
  std::set<Clause> clauses;
  std::set<Asn> variables;
  for (const auto& e : entries) {
    Clause c = build_clause(e.path, e.detected);
    variables.insert(c.literal_asns.begin(), c.literal_asns.end());
    clauses.insert(std::move(c));
    cnf.source_paths.push_back({e.path, e.detected, e.record_id});
  }
  // Positive clauses sort ahead of negative ones.
  cnf.clauses.assign(clauses.begin(), clauses.end());
  std::stable_partition(cnf.clauses.begin(), cnf.clauses.end(),
                        [](const Clause& c) { return c.truth; });
  cnf.variables.assign(variables.begin(), variables.end());
  return cnf;
}

Cnf to_cnf_clauses(const CnfInstance& instance) {
  auto index_of = [&](Asn asn) {
    auto it = std::lower_bound(instance.variables.begin(),
                               instance.variables.end(), asn);
    return static_cast<Literal>(it - instance.variables.begin()) + 1;
  };
  Cnf cnf;
  cnf.num_vars = static_cast<int>(instance.variables.size());
  std::set<Literal> negative_units;
  for (const Clause& c : instance.clauses) {
    if (c.truth) {
      std::vector<Literal> lits;
      for (Asn asn : c.literal_asns) lits.push_back(index_of(asn));
      cnf.clauses.push_back(std::move(lits));
    } else {
      for (Asn asn : c.literal_asns) negative_units.insert(index_of(asn));
    }
  }
  for (Literal v : negative_units) cnf.clauses.push_back({-v});
  return cnf;
}

std::string to_dimacs(const CnfInstance& instance) {
  std::string out = "c bucket " + to_string(instance.key) + "\n";
  for (std::size_t i = 0; i < instance.variables.size(); ++i) {
    out += "c var " + std::to_string(i + 1) + " = AS" +
           std::to_string(instance.variables[i]) + " " +
           std::string(to_string(instance.key.anomaly)) + "\n";
  }
  out += format_dimacs_body(to_cnf_clauses(instance));
  return out;
}

std::string url_hash(std::string_view url) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(url.data(), url.size(), digest, &len, EVP_sha256(), nullptr);
  std::string hex;
  char buf[3];
  for (int i = 0; i < 6; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string dimacs_filename(const BucketKey& key) {
  return std::string(to_string(key.anomaly)) + "_" + url_hash(key.url) + "_" +
         std::string(to_string(key.granularity)) + "_" + key.window_id + ".cnf";
}

}  // namespace censorloc
