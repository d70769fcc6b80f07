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

// Plain CNF formulas over variables 1..num_vars, DIMACS literal convention.

#ifndef CENSORLOC_CNF_H_
#define CENSORLOC_CNF_H_

#include <istream>
#include <string>
#include <vector>

namespace censorloc {

using Literal = int;  // +v or -v

struct Cnf {
  int num_vars = 0;
  std::vector<std::vector<Literal>> clauses;

  bool operator==(const Cnf&) const = default;
};

// Reads "p cnf <vars> <clauses>" followed by zero-terminated clauses.
// Comment lines start with 'c'. Throws InputError on malformed input.
Cnf parse_dimacs(std::istream& in);

// Header plus one line per clause; no comments.
std::string format_dimacs_body(const Cnf& cnf);

}  // namespace censorloc

#endif  // CENSORLOC_CNF_H_
