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
// Cardinality-constrained monotone submodular maximization: greedy and
// threshold greedy under the value oracle model, with exact evaluation
// accounting and brute-force verification.
//

#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "restarts/trace.hpp"

namespace restarts {

// Subset of the ground set as sorted, distinct element indices.
using ElementSet = std::vector<int>;

inline ElementSet set_with(const ElementSet& s, int e) {
  ElementSet out;
  out.reserve(s.size() + 1);
  auto it = std::lower_bound(s.begin(), s.end(), e);
  out.insert(out.end(), s.begin(), it);
  out.push_back(e);
  out.insert(out.end(), it, s.end());
  return out;
}

inline bool set_contains(const ElementSet& s, int e) {
  return std::binary_search(s.begin(), s.end(), e);
}

// Ground set of distinct element identifiers; algorithms address elements by
// index.
struct GroundSet {
  std::vector<std::string> elements;

  explicit GroundSet(int n) {
    if (n < 1) throw std::invalid_argument("GroundSet: n must be >= 1");
    elements.reserve(n);
    for (int i = 0; i < n; ++i) elements.push_back(std::to_string(i));
  }

  explicit GroundSet(std::vector<std::string> ids) : elements(std::move(ids)) {
    if (elements.empty()) throw std::invalid_argument("GroundSet: empty");
    std::vector<std::string> sorted = elements;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("GroundSet: duplicate identifiers");
  }

  int size() const { return static_cast<int>(elements.size()); }
};

// Monotone nonnegative submodular value oracle. Every evaluate() bumps the
// call counter; a solver owns its oracle instance.
class SetFunctionOracle {
 public:
  using EvalFn = std::function<double(const ElementSet&)>;

  SetFunctionOracle(int n, EvalFn fn) : n_(n), fn_(std::move(fn)) {
    if (n_ < 1) throw std::invalid_argument("SetFunctionOracle: n must be >= 1");
  }

  int n() const { return n_; }

  double evaluate(const ElementSet& s) const {
    ++calls_;
    return fn_(s);
  }

  long long call_counter() const { return calls_; }
  void reset_counter() const { calls_ = 0; }

 private:
  int n_;
  EvalFn fn_;
  mutable long long calls_ = 0;
};

// Marginal gain g(S + e) - g(S). Costs two evaluations, or one when the
// caller passes the cached value of g(S).
inline double marginal_gain(const SetFunctionOracle& oracle, const ElementSet& s,
                            int e, std::optional<double> cached_value = std::nullopt) {
  if (e < 0 || e >= oracle.n())
    throw std::invalid_argument("marginal_gain: element out of range");
  if (set_contains(s, e))
    throw std::invalid_argument("marginal_gain: element already in the set");
  const double base = cached_value ? *cached_value : oracle.evaluate(s);
  return oracle.evaluate(set_with(s, e)) - base;
}

struct Selection {
  std::vector<int> chosen;  // in pick order
  double value = 0.0;
  long long evals_used = 0;

  ElementSet chosen_set() const {
    ElementSet s = chosen;
    std::sort(s.begin(), s.end());
    return s;
  }
};

// Greedy: add the element of maximal marginal gain for min(k, n) rounds.
// Ties break toward the smallest ground-set index. When `trace` is given it
// receives one row per added element.
inline Selection greedy(const SetFunctionOracle& oracle, int k,
                        Trace* trace = nullptr) {
  const int n = oracle.n();
  if (k < 1) throw std::invalid_argument("greedy: k must be >= 1");
  if (k > n) throw std::invalid_argument("greedy: k must be <= n");

  const long long calls_before = oracle.call_counter();
  Selection sel;
  ElementSet s;
  double current = oracle.evaluate(s);
  const int rounds = std::min(k, n);
  for (int round = 0; round < rounds; ++round) {
    int best_e = -1;
    double best_value = 0.0;
    for (int e = 0; e < n; ++e) {
      if (set_contains(s, e)) continue;
      const double value = oracle.evaluate(set_with(s, e));
      if (best_e < 0 || value > best_value) {
        best_e = e;
        best_value = value;
      }
    }
    s = set_with(s, best_e);
    sel.chosen.push_back(best_e);
    current = best_value;
    if (trace)
      trace->push_back({round + 1, static_cast<long long>(sel.chosen.size()),
                        current, std::nullopt,
                        oracle.call_counter() - calls_before});
  }
  sel.value = current;
  sel.evals_used = oracle.call_counter() - calls_before;
  return sel;
}

// Evaluation ceiling for threshold_greedy: n * (ceil(log_{1/(1-eps)}(n/eps)) + 2).
inline long long threshold_greedy_eval_bound(int n, double eps) {
  const double passes = std::ceil(std::log(n / eps) / std::log(1.0 / (1.0 - eps)));
  return static_cast<long long>(n) * (static_cast<long long>(passes) + 2);
}

// Threshold greedy: collect every element whose marginal gain clears the
// threshold phi, then scale phi down by (1 - eps) and restart the sweep,
// until phi < (eps/n) phi0 with phi0 = max_e g({e}). Singleton values from
// the phi0 sweep are reused for tests against the empty set, so a threshold
// test costs at most one evaluation.
inline Selection threshold_greedy(const SetFunctionOracle& oracle, int k,
                                  double eps, Trace* trace = nullptr) {
  const int n = oracle.n();
  if (k < 1) throw std::invalid_argument("threshold_greedy: k must be >= 1");
  if (k > n) throw std::invalid_argument("threshold_greedy: k must be <= n");
  if (!(eps > 0.0) || !(eps < 1.0))
    throw std::invalid_argument("threshold_greedy: eps must be in (0, 1)");

  const long long calls_before = oracle.call_counter();
  Selection sel;
  ElementSet s;
  double current = oracle.evaluate(s);

  std::vector<double> singleton(n);
  double phi0 = 0.0;
  for (int e = 0; e < n; ++e) {
    singleton[e] = oracle.evaluate({e});
    phi0 = std::max(phi0, singleton[e]);
  }
  if (phi0 <= 0.0) {
    sel.value = current;
    sel.evals_used = oracle.call_counter() - calls_before;
    return sel;
  }

  double phi = phi0;
  int pass = 0;
  while (phi >= (eps / n) * phi0 &&
         static_cast<int>(sel.chosen.size()) < k) {
    ++pass;
    for (int e = 0; e < n && static_cast<int>(sel.chosen.size()) < k; ++e) {
      if (set_contains(s, e)) continue;
      const double with_e = s.empty() ? singleton[e] : oracle.evaluate(set_with(s, e));
      if (with_e - current >= phi) {
        s = set_with(s, e);
        sel.chosen.push_back(e);
        current = with_e;
        if (trace)
          trace->push_back({pass, static_cast<long long>(sel.chosen.size()),
                            current, std::nullopt,
                            oracle.call_counter() - calls_before});
      }
    }
    phi *= (1.0 - eps);
  }
  sel.value = current;
  sel.evals_used = oracle.call_counter() - calls_before;
  return sel;
}

// Exact maximizer over all subsets of size <= k by enumeration (test oracle).
// Ties resolve to the lexicographically smallest chosen set.
inline Selection brute_force_submax(const SetFunctionOracle& oracle, int k) {
  const int n = oracle.n();
  if (n > 20)
    throw std::invalid_argument("brute_force_submax: ground set above desk scale");
  if (k < 0) throw std::invalid_argument("brute_force_submax: k must be >= 0");

  const long long calls_before = oracle.call_counter();
  Selection best;
  ElementSet prefix;
  best.value = oracle.evaluate(prefix);

  // Depth-first enumeration visits subsets in lexicographic order.
  std::function<void(int)> descend = [&](int start) {
    if (static_cast<int>(prefix.size()) >= k) return;
    for (int e = start; e < n; ++e) {
      prefix.push_back(e);
      const double value = oracle.evaluate(prefix);
      if (value > best.value) {
        best.value = value;
        best.chosen = prefix;
      }
      descend(e + 1);
      prefix.pop_back();
    }
  };
  descend(0);
  best.evals_used = oracle.call_counter() - calls_before;
  return best;
}

struct VerifyOptions {
  int samples = 256;           // triples sampled when n is above desk scale
  std::uint64_t seed = 12345;
  double tolerance = 1e-9;
};

// Checks non-negativity, monotonicity, and diminishing marginal gains.
// Exhaustive for n <= 12 (single-element supersets suffice by induction),
// sampled triples otherwise.
inline bool verify_submodular(const SetFunctionOracle& oracle,
                              const VerifyOptions& opts = {}) {
  const int n = oracle.n();
  const double tol = opts.tolerance;

  if (n <= 12) {
    const std::size_t count = std::size_t{1} << n;
    std::vector<double> g(count);
    ElementSet scratch;
    for (std::size_t mask = 0; mask < count; ++mask) {
      scratch.clear();
      for (int e = 0; e < n; ++e)
        if (mask & (std::size_t{1} << e)) scratch.push_back(e);
      g[mask] = oracle.evaluate(scratch);
      if (g[mask] < -tol) return false;
    }
    for (std::size_t mask = 0; mask < count; ++mask) {
      for (int e = 0; e < n; ++e) {
        if (mask & (std::size_t{1} << e)) continue;
        const std::size_t with_e = mask | (std::size_t{1} << e);
        if (g[with_e] < g[mask] - tol) return false;  // monotonicity
        for (int f = 0; f < n; ++f) {
          if (f == e || (mask & (std::size_t{1} << f))) continue;
          const std::size_t with_f = mask | (std::size_t{1} << f);
          // g_A(e) >= g_{A+f}(e)
          if (g[with_e] - g[mask] < g[with_f | (std::size_t{1} << e)] - g[with_f] - tol)
            return false;
        }
      }
    }
    return true;
  }

  std::mt19937_64 gen(opts.seed);
  for (int trial = 0; trial < opts.samples; ++trial) {
    ElementSet a, b;
    for (int e = 0; e < n; ++e) {
      const std::uint64_t bits = gen();
      if (bits & 1u) {
        b.push_back(e);
        if (bits & 2u) a.push_back(e);
      }
    }
    int e = static_cast<int>(gen() % n);
    while (set_contains(b, e)) e = static_cast<int>(gen() % n);
    const double ga = oracle.evaluate(a);
    const double gb = oracle.evaluate(b);
    if (ga < -tol || gb < ga - tol) return false;
    const double gain_a = oracle.evaluate(set_with(a, e)) - ga;
    const double gain_b = oracle.evaluate(set_with(b, e)) - gb;
    if (gain_a < gain_b - tol) return false;
  }
  return true;
}

// Weighted coverage function: g(S) = total weight of universe points covered
// by the union of the chosen elements' subsets. Monotone, nonnegative, and
// submodular by construction.
class CoverageInstance {
 public:
  CoverageInstance(int universe_size, std::vector<std::vector<int>> covers,
                   std::vector<double> weights)
      : universe_(universe_size),
        covers_(std::move(covers)),
        weights_(std::move(weights)) {
    if (universe_ < 1)
      throw std::invalid_argument("CoverageInstance: universe must be >= 1");
    if (static_cast<int>(weights_.size()) != universe_)
      throw std::invalid_argument("CoverageInstance: weight count mismatch");
    for (double w : weights_)
      if (w < 0.0)
        throw std::invalid_argument("CoverageInstance: negative weight");
    if (covers_.empty())
      throw std::invalid_argument("CoverageInstance: empty ground set");
    for (auto& cover : covers_) {
      for (int j : cover)
        if (j < 0 || j >= universe_)
          throw std::invalid_argument("CoverageInstance: universe index out of range");
      std::sort(cover.begin(), cover.end());
      cover.erase(std::unique(cover.begin(), cover.end()), cover.end());
    }
  }

  int n() const { return static_cast<int>(covers_.size()); }
  int universe_size() const { return universe_; }
  const std::vector<std::vector<int>>& covers() const { return covers_; }
  const std::vector<double>& weights() const { return weights_; }

  double coverage_value(const ElementSet& s) const {
    std::vector<char> covered(universe_, 0);
    for (int e : s)
      for (int j : covers_[e]) covered[j] = 1;
    double total = 0.0;
    for (int j = 0; j < universe_; ++j)
      if (covered[j]) total += weights_[j];
    return total;
  }

  // Fresh value oracle over a copy of the instance data.
  SetFunctionOracle oracle() const {
    return SetFunctionOracle(
        n(), [inst = *this](const ElementSet& s) { return inst.coverage_value(s); });
  }

 private:
  int universe_;
  std::vector<std::vector<int>> covers_;
  std::vector<double> weights_;
};

// Deterministic random coverage instance: each ground element covers each
// universe point with probability `density`; integer weights in [1, 10].
inline CoverageInstance make_random_coverage(int n, int universe,
                                             std::uint64_t seed,
                                             double density = 0.25) {
  if (n < 1 || universe < 1)
    throw std::invalid_argument("make_random_coverage: bad dimensions");
  if (!(density > 0.0) || density > 1.0)
    throw std::invalid_argument("make_random_coverage: density must be in (0, 1]");
  std::mt19937_64 gen(seed);
  std::vector<std::vector<int>> covers(n);
  for (int e = 0; e < n; ++e)
    for (int j = 0; j < universe; ++j) {
      const double u01 = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      if (u01 < density) covers[e].push_back(j);
    }
  std::vector<double> weights(universe);
  for (int j = 0; j < universe; ++j)
    weights[j] = static_cast<double>(1 + gen() % 10);
  return CoverageInstance(universe, std::move(covers), std::move(weights));
}

// Coverage file format: header "n u", then one line of covered universe
// indices per ground element (possibly empty), then one line of u weights.
inline CoverageInstance load_coverage(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("coverage: missing header");
  std::istringstream header(line);
  int n = 0, u = 0;
  if (!(header >> n >> u) || n < 1 || u < 1)
    throw std::runtime_error("coverage: bad header");
  std::vector<std::vector<int>> covers(n);
  for (int e = 0; e < n; ++e) {
    if (!std::getline(in, line))
      throw std::runtime_error("coverage: missing element line");
    std::istringstream row(line);
    int j;
    while (row >> j) covers[e].push_back(j);
  }
  if (!std::getline(in, line))
    throw std::runtime_error("coverage: missing weight line");
  std::istringstream row(line);
  std::vector<double> weights(u);
  for (int j = 0; j < u; ++j) {
    if (!(row >> weights[j])) throw std::runtime_error("coverage: bad weight");
  }
  return CoverageInstance(u, std::move(covers), std::move(weights));
}

inline CoverageInstance load_coverage_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("coverage: cannot open " + path);
  return load_coverage(in);
}

inline void save_coverage(std::ostream& out, const CoverageInstance& inst) {
  out << inst.n() << ' ' << inst.universe_size() << '\n';
  for (const auto& cover : inst.covers()) {
    for (std::size_t i = 0; i < cover.size(); ++i)
      out << (i ? " " : "") << cover[i];
    out << '\n';
  }
  const auto& w = inst.weights();
  for (std::size_t j = 0; j < w.size(); ++j) out << (j ? " " : "") << w[j];
  out << '\n';
}

}  // namespace restarts
