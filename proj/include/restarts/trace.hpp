// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace restarts {

// One row of a solver time series. `gap` is a certified upper bound on the
// distance to optimality (primal gap) when one is available at that point.
struct TraceRecord {
  int phase = 0;
  long long global_iter = 0;
  double objective_value = 0.0;
  std::optional<double> gap;
  long long oracle_calls = 0;
};

using Trace = std::vector<TraceRecord>;

// First iteration at which the recorded gap drops to `eps` or below.
// Returns nullopt if no row certifies that accuracy.
inline std::optional<long long> first_iter_within(const Trace& trace,
                                                  double eps) {
  for (const TraceRecord& row : trace) {
    if (row.gap && *row.gap <= eps) return row.global_iter;
  }
  return std::nullopt;
}

}  // namespace restarts
