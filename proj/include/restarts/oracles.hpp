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
// First-order oracles with call counters, plus the built-in test problems
// (diagonal quadratics, log-sum-exp, |x| + (mu/2) x^2, piecewise max).
//

#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "restarts/vec.hpp"

namespace restarts {

// Known optimum of a test problem. For problems whose minimizer is not unique
// (mu = 0) `x_star` is one representative and `f_star` is still exact.
struct KnownMinimizer {
  Vec x_star;
  double f_star = 0.0;
};

// Differentiable convex function with advertised constants (L, mu).
// Evaluation is pure; the counters track oracle usage.
class SmoothOracle {
 public:
  using ValueFn = std::function<double(const Vec&)>;
  using GradFn = std::function<Vec(const Vec&)>;

  SmoothOracle(int dim, double L, double mu, ValueFn value, GradFn gradient,
               std::optional<KnownMinimizer> minimizer = std::nullopt,
               std::string name = "custom")
      : dim_(dim),
        L_(L),
        mu_(mu),
        value_(std::move(value)),
        gradient_(std::move(gradient)),
        minimizer_(std::move(minimizer)),
        name_(std::move(name)) {
    if (dim_ < 1) throw std::invalid_argument("SmoothOracle: dim must be >= 1");
    if (!(L_ > 0.0)) throw std::invalid_argument("SmoothOracle: L must be > 0");
    if (mu_ < 0.0) throw std::invalid_argument("SmoothOracle: mu must be >= 0");
  }

  int dim() const { return dim_; }
  double L() const { return L_; }
  double mu() const { return mu_; }
  const std::optional<KnownMinimizer>& minimizer() const { return minimizer_; }
  const std::string& name() const { return name_; }

  double value(const Vec& x) const {
    ++value_calls_;
    return value_(x);
  }

  Vec gradient(const Vec& x) const {
    ++gradient_calls_;
    return gradient_(x);
  }

  long long value_calls() const { return value_calls_; }
  long long gradient_calls() const { return gradient_calls_; }
  long long total_calls() const { return value_calls_ + gradient_calls_; }
  void reset_counters() const { value_calls_ = gradient_calls_ = 0; }

  // True primal gap, available only when the minimizer is known.
  std::optional<double> true_gap(double fx) const {
    if (!minimizer_) return std::nullopt;
    return fx - minimizer_->f_star;
  }

  // Oracle advertising a different strong-convexity constant than this one.
  // Used to study bound behavior under misspecified parameters.
  SmoothOracle with_mu(double mu) const {
    return SmoothOracle(dim_, L_, mu, value_, gradient_, minimizer_,
                        name_ + "[mu=" + std::to_string(mu) + "]");
  }

 private:
  int dim_;
  double L_;
  double mu_;
  ValueFn value_;
  GradFn gradient_;
  std::optional<KnownMinimizer> minimizer_;
  std::string name_;
  mutable long long value_calls_ = 0;
  mutable long long gradient_calls_ = 0;
};

// Convex function accessed through value and subgradient queries; G bounds
// the subgradient norms over the working region.
class NonsmoothOracle {
 public:
  using ValueFn = std::function<double(const Vec&)>;
  using SubgradFn = std::function<Vec(const Vec&)>;

  NonsmoothOracle(int dim, double G, double mu, ValueFn value,
                  SubgradFn subgradient,
                  std::optional<KnownMinimizer> minimizer = std::nullopt,
                  std::string name = "custom")
      : dim_(dim),
        G_(G),
        mu_(mu),
        value_(std::move(value)),
        subgradient_(std::move(subgradient)),
        minimizer_(std::move(minimizer)),
        name_(std::move(name)) {
    if (dim_ < 1) throw std::invalid_argument("NonsmoothOracle: dim must be >= 1");
    if (!(G_ > 0.0)) throw std::invalid_argument("NonsmoothOracle: G must be > 0");
    if (mu_ < 0.0) throw std::invalid_argument("NonsmoothOracle: mu must be >= 0");
  }

  int dim() const { return dim_; }
  double G() const { return G_; }
  double mu() const { return mu_; }
  const std::optional<KnownMinimizer>& minimizer() const { return minimizer_; }
  const std::string& name() const { return name_; }

  double value(const Vec& x) const {
    ++value_calls_;
    return value_(x);
  }

  Vec subgradient(const Vec& x) const {
    ++subgradient_calls_;
    return subgradient_(x);
  }

  long long value_calls() const { return value_calls_; }
  long long subgradient_calls() const { return subgradient_calls_; }
  long long total_calls() const { return value_calls_ + subgradient_calls_; }
  void reset_counters() const { value_calls_ = subgradient_calls_ = 0; }

  std::optional<double> true_gap(double fx) const {
    if (!minimizer_) return std::nullopt;
    return fx - minimizer_->f_star;
  }

 private:
  int dim_;
  double G_;
  double mu_;
  ValueFn value_;
  SubgradFn subgradient_;
  std::optional<KnownMinimizer> minimizer_;
  mutable long long value_calls_ = 0;
  mutable long long subgradient_calls_ = 0;
  std::string name_;
};

// f(x) = 1/2 sum_i lambda_i x_i^2 with lambda_i >= 0. L = max lambda,
// mu = min lambda, minimizer 0.
inline SmoothOracle make_diagonal_quadratic(const Vec& lambdas) {
  if (lambdas.empty())
    throw std::invalid_argument("make_diagonal_quadratic: empty spectrum");
  double lo = lambdas[0], hi = lambdas[0];
  for (double v : lambdas) {
    if (v < 0.0)
      throw std::invalid_argument("make_diagonal_quadratic: negative eigenvalue");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const int n = static_cast<int>(lambdas.size());
  auto value = [lambdas](const Vec& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < lambdas.size(); ++i) s += lambdas[i] * x[i] * x[i];
    return 0.5 * s;
  };
  auto gradient = [lambdas](const Vec& x) {
    Vec g(x.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i) g[i] = lambdas[i] * x[i];
    return g;
  };
  KnownMinimizer opt{Vec(lambdas.size(), 0.0), 0.0};
  return SmoothOracle(n, hi, lo, value, gradient, opt, "diagonal-quadratic");
}

// Diagonal quadratic with spectrum linearly spaced over [mu, L] (endpoints
// attained exactly), so the advertised constants are tight.
inline SmoothOracle make_conditioned_quadratic(double L, double mu, int n) {
  if (!(L >= mu) || !(mu > 0.0) || n < 1)
    throw std::invalid_argument("make_conditioned_quadratic: need L >= mu > 0, n >= 1");
  Vec lambdas(n);
  for (int i = 0; i < n; ++i) {
    lambdas[i] = (n == 1) ? L : mu + (L - mu) * static_cast<double>(i) / (n - 1);
  }
  lambdas[0] = mu;
  lambdas[n - 1] = L;
  return make_diagonal_quadratic(lambdas);
}

// f(x) = log(e^x + e^-x) in one dimension: 1-smooth, merely convex (mu = 0),
// minimized at 0 with value log 2.
inline SmoothOracle make_log_sum_exp() {
  auto value = [](const Vec& x) {
    const double a = std::abs(x[0]);
    // log(e^x + e^-x) = |x| + log(1 + e^-2|x|), stable for large |x|.
    return a + std::log1p(std::exp(-2.0 * a));
  };
  auto gradient = [](const Vec& x) { return Vec{std::tanh(x[0])}; };
  KnownMinimizer opt{Vec{0.0}, std::log(2.0)};
  return SmoothOracle(1, 1.0, 0.0, value, gradient, opt, "log-sum-exp");
}

// Quadratic on the first coordinate only: f(x) = (L/2) x_1^2. Smooth with
// mu = 0 and minimizer set {x : x_1 = 0}.
inline SmoothOracle make_flat_quadratic(double L, int n) {
  if (!(L > 0.0) || n < 1)
    throw std::invalid_argument("make_flat_quadratic: need L > 0, n >= 1");
  auto value = [L](const Vec& x) { return 0.5 * L * x[0] * x[0]; };
  auto gradient = [L](const Vec& x) {
    Vec g(x.size(), 0.0);
    g[0] = L * x[0];
    return g;
  };
  KnownMinimizer opt{Vec(n, 0.0), 0.0};
  return SmoothOracle(n, L, 0.0, value, gradient, opt, "flat-quadratic");
}

// f(x) = |x| + (mu/2) x^2 in one dimension: mu-strongly convex, subgradient
// norms bounded by G = 1 + mu * radius on [-radius, radius]. Minimizer 0.
inline NonsmoothOracle make_abs_plus_quadratic(double mu) {
  auto value = [mu](const Vec& x) {
    return std::abs(x[0]) + 0.5 * mu * x[0] * x[0];
  };
  auto subgradient = [mu](const Vec& x) {
    const double sign = x[0] > 0.0 ? 1.0 : (x[0] < 0.0 ? -1.0 : 0.0);
    return Vec{sign + mu * x[0]};
  };
  KnownMinimizer opt{Vec{0.0}, 0.0};
  return NonsmoothOracle(1, 1.0 + mu, mu, value, subgradient, opt,
                         "abs-plus-quadratic");
}

// f(x) = max(x, -2x) in one dimension. G = 2; minimizer 0; merely convex.
inline NonsmoothOracle make_piecewise_max() {
  auto value = [](const Vec& x) { return std::max(x[0], -2.0 * x[0]); };
  auto subgradient = [](const Vec& x) {
    if (x[0] > 0.0) return Vec{1.0};
    if (x[0] < 0.0) return Vec{-2.0};
    return Vec{0.0};  // 0 lies in the subdifferential at the kink
  };
  KnownMinimizer opt{Vec{0.0}, 0.0};
  return NonsmoothOracle(1, 2.0, 0.0, value, subgradient, opt, "piecewise-max");
}

// Max over coordinates of the central difference (f(x+h e_i) - f(x-h e_i))/(2h)
// against the oracle gradient component. Returns the absolute error.
inline double finite_difference_check(const SmoothOracle& oracle, const Vec& x,
                                      double h) {
  if (!(h > 0.0))
    throw std::invalid_argument("finite_difference_check: h must be > 0");
  const Vec g = oracle.gradient(x);
  double worst = 0.0;
  Vec probe = x;
  for (int i = 0; i < oracle.dim(); ++i) {
    probe[i] = x[i] + h;
    const double fp = oracle.value(probe);
    probe[i] = x[i] - h;
    const double fm = oracle.value(probe);
    probe[i] = x[i];
    worst = std::max(worst, std::abs((fp - fm) / (2.0 * h) - g[i]));
  }
  return worst;
}

}  // namespace restarts
