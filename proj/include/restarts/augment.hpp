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
// Augmentation-based exact optimization over finite 0/1 sets, accelerated by
// bit scaling (floor-scaled objectives, halving scale) and geometric scaling
// (l1-regularized objectives, halving penalty), with step accounting.
//

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "restarts/trace.hpp"

namespace restarts {

using BinaryVector = std::vector<std::uint8_t>;  // entries in {0,1}

// Nonnegative integer objective; C = max entry + 1.
struct IntegerObjective {
  std::vector<long long> c;

  long long C() const {
    long long m = 0;
    for (long long v : c) m = std::max(m, v);
    return m + 1;
  }

  long long value(const BinaryVector& x) const {
    long long s = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (x[i]) s += c[i];
    return s;
  }
};

// Entrywise floor(c / mu) for a power-of-two scale mu >= 1.
inline IntegerObjective scale_objective(const IntegerObjective& c,
                                        long long mu) {
  if (mu < 1 || (mu & (mu - 1)) != 0)
    throw std::invalid_argument("scale_objective: mu must be a power of two >= 1");
  IntegerObjective scaled;
  scaled.c.reserve(c.c.size());
  for (long long v : c.c) scaled.c.push_back(v / mu);
  return scaled;
}

// Regularized move score c(x - x_ref) - mu * |x - x_ref|_1, linear in x for
// fixed x_ref.
inline double geo_objective(const IntegerObjective& c, double mu,
                            const BinaryVector& x, const BinaryVector& x_ref) {
  long long delta_c = 0;
  long long hamming = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != x_ref[i]) {
      ++hamming;
      delta_c += x[i] ? c.c[i] : -c.c[i];
    }
  }
  return static_cast<double>(delta_c) - mu * static_cast<double>(hamming);
}

// Finite 0/1 feasible set with a nonnegative integer objective. Instances
// with negative objective entries are canonicalized at construction by
// flipping those coordinates; solver routines work in canonical space and
// convert at the boundary.
class AugmentInstance {
 public:
  static AugmentInstance explicit_set(int n,
                                      std::vector<BinaryVector> points,
                                      std::vector<long long> raw_objective) {
    AugmentInstance inst;
    inst.init(n, std::move(raw_objective));
    if (points.empty())
      throw std::invalid_argument("AugmentInstance: feasible set is empty");
    for (BinaryVector& p : points) {
      if (static_cast<int>(p.size()) != n)
        throw std::invalid_argument("AugmentInstance: point dimension mismatch");
      for (std::uint8_t b : p)
        if (b > 1) throw std::invalid_argument("AugmentInstance: non-binary entry");
      p = inst.from_original(p);
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    inst.points_ = std::move(points);
    return inst;
  }

  static AugmentInstance full_cube(int n, std::vector<long long> raw_objective) {
    if (n > 25)
      throw std::invalid_argument("AugmentInstance: cube dimension above desk scale");
    AugmentInstance inst;
    inst.init(n, std::move(raw_objective));
    inst.cube_ = true;
    return inst;
  }

  int n() const { return n_; }
  bool is_cube() const { return cube_; }
  const IntegerObjective& objective() const { return objective_; }
  std::size_t feasible_count() const {
    return cube_ ? (std::size_t{1} << n_) : points_.size();
  }

  bool contains(const BinaryVector& x) const {
    if (static_cast<int>(x.size()) != n_) return false;
    for (std::uint8_t b : x)
      if (b > 1) return false;
    if (cube_) return true;
    return std::binary_search(points_.begin(), points_.end(), x);
  }

  // Visits feasible points in lexicographic order of the canonical
  // coordinates; the visitor returns false to stop early.
  template <typename Visitor>
  void for_each_point(Visitor&& visit) const {
    if (cube_) {
      BinaryVector scratch(n_);
      const std::uint64_t count = std::uint64_t{1} << n_;
      for (std::uint64_t m = 0; m < count; ++m) {
        for (int i = 0; i < n_; ++i)
          scratch[i] = static_cast<std::uint8_t>((m >> (n_ - 1 - i)) & 1u);
        if (!visit(scratch)) return;
      }
    } else {
      for (const BinaryVector& p : points_) {
        if (!visit(p)) return;
      }
    }
  }

  bool flipped() const { return flip_any_; }

  BinaryVector to_original(BinaryVector x) const {
    if (flip_any_)
      for (int i = 0; i < n_; ++i)
        if (flip_mask_[i]) x[i] ^= 1u;
    return x;
  }

  BinaryVector from_original(BinaryVector x) const { return to_original(std::move(x)); }

  // Objective value under the as-loaded (possibly negative) objective.
  long long original_value(const BinaryVector& x_original) const {
    return objective_.value(from_original(x_original)) + offset_;
  }

  // As-loaded objective entry, sign restored.
  long long original_objective_entry(int i) const {
    return flip_mask_[i] ? -objective_.c[i] : objective_.c[i];
  }

 private:
  void init(int n, std::vector<long long> raw) {
    if (n < 1) throw std::invalid_argument("AugmentInstance: n must be >= 1");
    if (static_cast<int>(raw.size()) != n)
      throw std::invalid_argument("AugmentInstance: objective dimension mismatch");
    n_ = n;
    flip_mask_.assign(n, 0);
    objective_.c.resize(n);
    for (int i = 0; i < n; ++i) {
      if (raw[i] < 0) {
        flip_mask_[i] = 1;
        flip_any_ = true;
        objective_.c[i] = -raw[i];
        offset_ += raw[i];
      } else {
        objective_.c[i] = raw[i];
      }
    }
  }

  int n_ = 0;
  bool cube_ = false;
  std::vector<BinaryVector> points_;  // canonical space, sorted
  IntegerObjective objective_;        // canonical, nonnegative
  std::vector<std::uint8_t> flip_mask_;
  bool flip_any_ = false;
  long long offset_ = 0;
};

enum class ImprovePolicy { max_improvement, min_improvement, lexicographic };

// Move score: positive means `candidate` improves on `current`.
using MoveScore =
    std::function<double(const BinaryVector& candidate, const BinaryVector& current)>;

// Plain linear improvement c(x - current). Holds its own copy of c.
inline MoveScore linear_score(IntegerObjective c) {
  return [c = std::move(c)](const BinaryVector& candidate,
                            const BinaryVector& current) {
    return static_cast<double>(c.value(candidate) - c.value(current));
  };
}

// Finds a feasible point with positive score, chosen by policy; ties are
// broken toward the lexicographically smallest candidate.
class ImprovingOracle {
 public:
  ImprovingOracle(const AugmentInstance& instance, ImprovePolicy policy)
      : instance_(&instance), policy_(policy) {}

  ImprovePolicy policy() const { return policy_; }
  long long find_calls() const { return find_calls_; }

  std::optional<BinaryVector> find(const BinaryVector& current,
                                   const MoveScore& score) const {
    ++find_calls_;
    std::optional<BinaryVector> best;
    double best_score = 0.0;
    instance_->for_each_point([&](const BinaryVector& candidate) {
      const double s = score(candidate, current);
      if (s > 0.0) {
        switch (policy_) {
          case ImprovePolicy::lexicographic:
            best = candidate;
            return false;  // enumeration is lexicographic: first hit wins
          case ImprovePolicy::max_improvement:
            if (!best || s > best_score) {
              best = candidate;
              best_score = s;
            }
            break;
          case ImprovePolicy::min_improvement:
            if (!best || s < best_score) {
              best = candidate;
              best_score = s;
            }
            break;
        }
      }
      return true;
    });
    return best;
  }

 private:
  const AugmentInstance* instance_;
  ImprovePolicy policy_;
  mutable long long find_calls_ = 0;
};

struct AugmentOutcome {
  BinaryVector x;         // canonical space
  long long steps = 0;    // accepted improvements
};

// Augmentation: replace the current point by an improving feasible point
// until no improving solution exists. Works in canonical coordinates.
inline AugmentOutcome augment(
    const AugmentInstance& instance, const ImprovingOracle& oracle,
    const BinaryVector& x0, const MoveScore& score,
    const std::function<void(const BinaryVector&, const BinaryVector&)>&
        on_step = nullptr) {
  if (!instance.contains(x0))
    throw std::invalid_argument("augment: infeasible starting point");
  AugmentOutcome out;
  out.x = x0;
  while (auto next = oracle.find(out.x, score)) {
    if (on_step) on_step(out.x, *next);
    out.x = std::move(*next);
    ++out.steps;
  }
  return out;
}

struct ScalingPhase {
  double mu = 0.0;
  long long steps = 0;
};

struct GeoStep {
  int phase = 0;                // 1-based index among executed phases
  long long value_before = 0;   // canonical objective values
  long long value_after = 0;
};

struct ScalingResult {
  BinaryVector x;               // original space
  long long total_steps = 0;
  long long augment_calls = 0;
  std::vector<ScalingPhase> phases;
  std::vector<GeoStep> step_log;  // geometric scaling only
  Trace trace;                    // one row per accepted step
};

namespace detail {

inline void record_step(Trace& trace, const AugmentInstance& instance,
                        int phase, long long step_index,
                        const BinaryVector& x_canonical,
                        long long improving_queries) {
  TraceRecord row;
  row.phase = phase;
  row.global_iter = step_index;
  row.objective_value = static_cast<double>(
      instance.original_value(instance.to_original(x_canonical)));
  row.oracle_calls = improving_queries;
  trace.push_back(row);
}

}  // namespace detail

// Bit scaling: optimize the floor-scaled objectives floor(c / mu) for
// mu = 2^ceil(log2 C), ..., 2, 1, warm-starting each stage from the previous
// optimum. Stages whose scaled objective is identically zero admit no
// improving step and are skipped without an augment call.
inline ScalingResult bit_scaling(const AugmentInstance& instance,
                                 const BinaryVector& x0_original,
                                 ImprovePolicy policy = ImprovePolicy::min_improvement) {
  BinaryVector x = instance.from_original(x0_original);
  if (!instance.contains(x))
    throw std::invalid_argument("bit_scaling: infeasible starting point");

  ScalingResult result;
  const ImprovingOracle oracle(instance, policy);
  const long long C = instance.objective().C();
  long long mu = 1;
  while (mu < C) mu *= 2;  // 2^ceil(log2 C)

  int phase = 0;
  for (; mu >= 1; mu /= 2) {
    const IntegerObjective scaled = scale_objective(instance.objective(), mu);
    bool zero = true;
    for (long long v : scaled.c)
      if (v != 0) { zero = false; break; }
    if (zero) continue;

    ++phase;
    ++result.augment_calls;
    const MoveScore score = linear_score(scaled);
    long long phase_steps = 0;
    AugmentOutcome out = augment(
        instance, oracle, x, score,
        [&](const BinaryVector&, const BinaryVector& to) {
          ++phase_steps;
          detail::record_step(result.trace, instance, phase,
                              result.total_steps + phase_steps, to,
                              oracle.find_calls());
        });
    x = std::move(out.x);
    result.total_steps += out.steps;
    result.phases.push_back({static_cast<double>(mu), out.steps});
  }
  result.x = instance.to_original(x);
  return result;
}

// Geometric scaling: augment under c(x - ref) - mu |x - ref|_1 with mu
// halving from nC. The opening value mu = nC admits no improving step and is
// skipped; scaling continues past mu < 1 down to mu < 1/n, where integrality
// of c certifies optimality of the final point.
inline ScalingResult geometric_scaling(
    const AugmentInstance& instance, const BinaryVector& x0_original,
    ImprovePolicy policy = ImprovePolicy::min_improvement) {
  BinaryVector x = instance.from_original(x0_original);
  if (!instance.contains(x))
    throw std::invalid_argument("geometric_scaling: infeasible starting point");

  ScalingResult result;
  const ImprovingOracle oracle(instance, policy);
  const IntegerObjective& c = instance.objective();
  const int n = instance.n();
  double mu = static_cast<double>(n) * static_cast<double>(c.C());

  int phase = 0;
  while (true) {
    mu /= 2.0;
    ++phase;
    ++result.augment_calls;
    const MoveScore score = [&c, mu](const BinaryVector& candidate,
                                     const BinaryVector& current) {
      return geo_objective(c, mu, candidate, current);
    };
    long long phase_steps = 0;
    AugmentOutcome out = augment(
        instance, oracle, x, score,
        [&](const BinaryVector& from, const BinaryVector& to) {
          ++phase_steps;
          result.step_log.push_back({phase, c.value(from), c.value(to)});
          detail::record_step(result.trace, instance, phase,
                              result.total_steps + phase_steps, to,
                              oracle.find_calls());
        });
    x = std::move(out.x);
    result.total_steps += out.steps;
    result.phases.push_back({mu, out.steps});
    if (mu < 1.0 / n) break;
  }
  result.x = instance.to_original(x);
  return result;
}

// Plain augmentation on the instance objective, in original coordinates.
inline ScalingResult naive_augment(const AugmentInstance& instance,
                                   const BinaryVector& x0_original,
                                   ImprovePolicy policy) {
  BinaryVector x = instance.from_original(x0_original);
  if (!instance.contains(x))
    throw std::invalid_argument("naive_augment: infeasible starting point");
  ScalingResult result;
  const ImprovingOracle oracle(instance, policy);
  result.augment_calls = 1;
  long long steps = 0;
  AugmentOutcome out =
      augment(instance, oracle, x, linear_score(instance.objective()),
              [&](const BinaryVector&, const BinaryVector& to) {
                ++steps;
                detail::record_step(result.trace, instance, 1, steps, to,
                                    oracle.find_calls());
              });
  result.total_steps = out.steps;
  result.phases.push_back({0.0, out.steps});
  result.x = instance.to_original(out.x);
  return result;
}

// Exact maximizer by enumeration; ties resolve to the lexicographically
// smallest point in original coordinates.
inline BinaryVector brute_force_opt(const AugmentInstance& instance) {
  if (instance.feasible_count() == 0)
    throw std::invalid_argument("brute_force_opt: empty feasible set");
  std::optional<BinaryVector> best_original;
  long long best_value = 0;
  instance.for_each_point([&](const BinaryVector& p) {
    const long long v = instance.objective().value(p);
    BinaryVector original = instance.to_original(p);
    if (!best_original || v > best_value ||
        (v == best_value && original < *best_original)) {
      best_original = std::move(original);
      best_value = v;
    }
    return true;
  });
  return *best_original;
}

// The worst-case family for plain augmentation: the full cube with
// c = (1, 2, 4, ..., 2^(n-1)).
inline AugmentInstance make_cube_powers(int n) {
  if (n < 1 || n > 25)
    throw std::invalid_argument("make_cube_powers: n must be in [1, 25]");
  std::vector<long long> c(n);
  for (int i = 0; i < n; ++i) c[i] = 1LL << i;
  return AugmentInstance::full_cube(n, std::move(c));
}

// m distinct uniformly sampled 0/1 points with random objective entries in
// [0, 100]; deterministic in the seed.
inline AugmentInstance make_random_01_polytope(int n, std::size_t m,
                                               std::uint64_t seed) {
  if (n < 1 || n > 25)
    throw std::invalid_argument("make_random_01_polytope: n must be in [1, 25]");
  if (m < 1 || m > (std::size_t{1} << n))
    throw std::invalid_argument("make_random_01_polytope: need 1 <= m <= 2^n");
  std::mt19937_64 gen(seed);
  std::unordered_set<std::uint64_t> seen;
  std::vector<BinaryVector> points;
  while (points.size() < m) {
    const std::uint64_t mask = gen() & ((std::uint64_t{1} << n) - 1);
    if (!seen.insert(mask).second) continue;
    BinaryVector p(n);
    for (int i = 0; i < n; ++i)
      p[i] = static_cast<std::uint8_t>((mask >> (n - 1 - i)) & 1u);
    points.push_back(std::move(p));
  }
  std::vector<long long> c(n);
  for (int i = 0; i < n; ++i) c[i] = static_cast<long long>(gen() % 101);
  return AugmentInstance::explicit_set(n, std::move(points), std::move(c));
}

// Plain-text instance format: header "n m", then m lines of space-separated
// bits, then one line of n objective entries.
inline AugmentInstance load_instance(std::istream& in) {
  int n = 0;
  std::size_t m = 0;
  if (!(in >> n >> m)) throw std::runtime_error("instance: bad header");
  if (n < 1 || m < 1) throw std::runtime_error("instance: bad dimensions");
  std::vector<BinaryVector> points(m, BinaryVector(n));
  for (std::size_t j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) {
      int b = 0;
      if (!(in >> b) || (b != 0 && b != 1))
        throw std::runtime_error("instance: bad point entry");
      points[j][i] = static_cast<std::uint8_t>(b);
    }
  }
  std::vector<long long> c(n);
  for (int i = 0; i < n; ++i) {
    if (!(in >> c[i])) throw std::runtime_error("instance: bad objective entry");
  }
  return AugmentInstance::explicit_set(n, std::move(points), std::move(c));
}

inline AugmentInstance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("instance: cannot open " + path);
  return load_instance(in);
}

inline void save_instance(std::ostream& out, const AugmentInstance& instance) {
  std::vector<BinaryVector> points;
  instance.for_each_point([&](const BinaryVector& p) {
    points.push_back(instance.to_original(p));
    return true;
  });
  out << instance.n() << ' ' << points.size() << '\n';
  for (const BinaryVector& p : points) {
    for (int i = 0; i < instance.n(); ++i)
      out << (i ? " " : "") << static_cast<int>(p[i]);
    out << '\n';
  }
  for (int i = 0; i < instance.n(); ++i)
    out << (i ? " " : "") << instance.original_objective_entry(i);
  out << '\n';
}

}  // namespace restarts
