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

//
// Generic restart engine: run a base algorithm for a fixed number of
// iterations per phase, feeding each phase's output into the next as the
// starting point, plus schedule construction from the halving analysis.
//

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "restarts/trace.hpp"
#include "restarts/vec.hpp"

namespace restarts {

// Iteration counts T_1..T_K, one entry per restart phase.
struct RestartSchedule {
  std::vector<long long> per_phase_iters;

  int phase_count() const { return static_cast<int>(per_phase_iters.size()); }

  long long total_iterations() const {
    long long t = 0;
    for (long long v : per_phase_iters) t += v;
    return t;
  }

  bool valid() const {
    for (long long v : per_phase_iters) {
      if (v < 1) return false;
    }
    return true;
  }
};

enum class ScheduleVariant { gd, agd, subgrad };

// Number of gap halvings needed to go from gap0 down to eps: ceil(log2(gap0/eps)).
// Already at target (eps >= gap0) means zero phases.
inline int phase_count(double gap0, double eps) {
  if (!(gap0 > 0.0) || !(eps > 0.0))
    throw std::invalid_argument("phase_count: gap0 and eps must be positive");
  if (eps >= gap0) return 0;
  return static_cast<int>(std::ceil(std::log2(gap0 / eps)));
}

struct ScheduleParams {
  std::optional<double> L;  // smoothness (gd, agd)
  double mu = 0.0;          // strong convexity (all variants)
  std::optional<double> G;  // subgradient norm bound (subgrad)
  double gap0 = 0.0;        // upper bound on the initial primal gap
  double eps = 0.0;         // target accuracy
  double agd_c = 2.0;       // constant in the accelerated 1/t^2 rate
};

// Per-phase iteration counts so that each phase halves the primal gap:
//   gd:      T_l = ceil(4 L / mu)
//   agd:     T_l = ceil(sqrt(4 c L / mu))
//   subgrad: T_l = ceil(4 G^2 / (mu * gap_l)),  gap_l = gap0 * 2^-(l-1)
// with K = ceil(log2(gap0 / eps)) phases in all variants.
inline RestartSchedule halving_schedule(ScheduleVariant variant,
                                        const ScheduleParams& p) {
  if (!(p.mu > 0.0))
    throw std::invalid_argument("halving_schedule: mu must be positive");
  if (!(p.gap0 > 0.0) || !(p.eps > 0.0))
    throw std::invalid_argument("halving_schedule: gap0 and eps must be positive");

  const int phases = phase_count(p.gap0, p.eps);
  RestartSchedule schedule;
  schedule.per_phase_iters.reserve(phases);

  switch (variant) {
    case ScheduleVariant::gd: {
      if (!p.L || !(*p.L > 0.0))
        throw std::invalid_argument("halving_schedule: gd requires L > 0");
      const long long t = static_cast<long long>(std::ceil(4.0 * *p.L / p.mu));
      schedule.per_phase_iters.assign(phases, t);
      break;
    }
    case ScheduleVariant::agd: {
      if (!p.L || !(*p.L > 0.0))
        throw std::invalid_argument("halving_schedule: agd requires L > 0");
      if (!(p.agd_c > 0.0))
        throw std::invalid_argument("halving_schedule: agd constant must be positive");
      const long long t = static_cast<long long>(
          std::ceil(std::sqrt(4.0 * p.agd_c * *p.L / p.mu)));
      schedule.per_phase_iters.assign(phases, t);
      break;
    }
    case ScheduleVariant::subgrad: {
      if (!p.G || !(*p.G > 0.0))
        throw std::invalid_argument("halving_schedule: subgrad requires G > 0");
      double gap = p.gap0;
      for (int l = 0; l < phases; ++l) {
        schedule.per_phase_iters.push_back(static_cast<long long>(
            std::ceil(4.0 * *p.G * *p.G / (p.mu * gap))));
        gap *= 0.5;
      }
      break;
    }
  }
  return schedule;
}

// Thrown when a base algorithm fails inside a restart phase.
class PhaseError : public std::runtime_error {
 public:
  PhaseError(int phase, const std::string& what)
      : std::runtime_error("phase " + std::to_string(phase) + ": " + what),
        phase_(phase) {}
  int phase() const { return phase_; }

 private:
  int phase_;
};

// Output of one base-algorithm run: final point and per-iteration trace.
struct PhaseResult {
  Vec x;
  Trace trace;
};

struct RestartResult {
  Vec x;
  Trace trace;
};

// Simple restart scheme: for l = 1..K run the base algorithm for T_l
// iterations starting from the previous phase's output. The base algorithm is
// any callable (const Vec& start, long long iters) -> PhaseResult that is
// deterministic and keeps no state across calls.
template <typename BaseAlgorithm>
RestartResult run_restart_scheme(BaseAlgorithm&& base, const Vec& x0,
                                 const RestartSchedule& schedule) {
  if (!schedule.valid())
    throw std::invalid_argument("run_restart_scheme: invalid schedule");

  RestartResult result;
  result.x = x0;
  long long global_offset = 0;
  for (int l = 0; l < schedule.phase_count(); ++l) {
    const int phase = l + 1;
    PhaseResult phase_result;
    try {
      phase_result = base(result.x, schedule.per_phase_iters[l]);
    } catch (const std::exception& e) {
      throw PhaseError(phase, e.what());
    }
    if (!all_finite(phase_result.x))
      throw PhaseError(phase, "base algorithm produced a non-finite point");
    result.x = std::move(phase_result.x);
    for (TraceRecord row : phase_result.trace) {
      row.phase = phase;
      row.global_iter += global_offset;
      result.trace.push_back(row);
    }
    global_offset += schedule.per_phase_iters[l];
  }
  return result;
}

}  // namespace restarts
