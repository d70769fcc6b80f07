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

// Compiles (path, verdict) observations into per-bucket CNF instances.
//
// A path on which the anomaly was detected says "at least one AS on this
// path censors": a positive disjunction over its ASes. A clean path says no
// AS on it censors, which is a set of negative unit clauses.

#ifndef CENSORLOC_TOMOGRAPHY_H_
#define CENSORLOC_TOMOGRAPHY_H_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "censorloc/cnf.h"
#include "censorloc/model.h"

namespace censorloc {

// URL placeholder used in bucket keys when URL splitting is disabled.
inline constexpr std::string_view kAllUrls = "*";

Clause build_clause(const AsPath& path, bool detected);

using BucketMap = std::map<BucketKey, std::vector<PathObservation>>;

// Groups observations by (anomaly, url, granularity, window). Entries keep
// timestamp order within a bucket.
BucketMap bucket(std::span<const PathObservation> observations,
                 TimeGranularity granularity, bool split_by_url = true);

// `entries` must be non-empty.
CnfInstance build_cnf(const BucketKey& key,
                      std::span<const PathObservation> entries);

// Variable i (1-based) is instance.variables[i - 1]. Positive disjunctions
// come first in clause order, then the deduplicated negative units in
// variable order.
Cnf to_cnf_clauses(const CnfInstance& instance);

std::string to_dimacs(const CnfInstance& instance);

// First 12 hex digits of SHA-256(url).
std::string url_hash(std::string_view url);

// "<anomaly>_<urlhash>_<granularity>_<window>.cnf"
std::string dimacs_filename(const BucketKey& key);

}  // namespace censorloc

#endif  // CENSORLOC_TOMOGRAPHY_H_
