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
// First-order base algorithms (gradient descent, accelerated gradient
// descent, subgradient descent), their restarted versions, and the
// regularization reduction from the merely-convex case to the strongly
// convex one.
//

#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>

#include "restarts/oracles.hpp"
#include "restarts/restart.hpp"
#include "restarts/trace.hpp"
#include "restarts/vec.hpp"

namespace restarts {

// One gradient step x - (1/L) grad f(x).
inline Vec gd_step(const SmoothOracle& oracle, const Vec& x) {
  Vec g = oracle.gradient(x);
  if (!all_finite(g)) throw std::runtime_error("gd_step: non-finite gradient");
  return add_scaled(x, -1.0 / oracle.L(), g);
}

namespace detail {

inline void record_iter(Trace& trace, long long t, double value,
                        std::optional<double> gap, long long calls) {
  TraceRecord row;
  row.phase = 0;
  row.global_iter = t;
  row.objective_value = value;
  row.gap = gap;
  row.oracle_calls = calls;
  trace.push_back(row);
}

}  // namespace detail

// Gradient descent with fixed step 1/L for T iterations. The objective is
// nonincreasing along the iterates; the trace records every iterate.
inline PhaseResult run_gd(const SmoothOracle& oracle, const Vec& x0,
                          long long T) {
  if (T < 0) throw std::invalid_argument("run_gd: negative iteration budget");
  PhaseResult result;
  result.x = x0;
  for (long long t = 1; t <= T; ++t) {
    result.x = gd_step(oracle, result.x);
    const double value = oracle.value(result.x);
    if (!std::isfinite(value))
      throw std::runtime_error("run_gd: non-finite objective value");
    detail::record_iter(result.trace, t, value, oracle.true_gap(value),
                        oracle.total_calls());
  }
  return result;
}

// Accelerated gradient descent, momentum form
//   x_{t+1} = y_t - (1/L) grad f(y_t),  y_{t+1} = x_{t+1} + t/(t+3) (x_{t+1} - x_t)
// with y_0 = x_0.
inline PhaseResult run_agd(const SmoothOracle& oracle, const Vec& x0,
                           long long T) {
  if (T < 0) throw std::invalid_argument("run_agd: negative iteration budget");
  PhaseResult result;
  result.x = x0;
  Vec y = x0;
  for (long long t = 0; t < T; ++t) {
    Vec g = oracle.gradient(y);
    if (!all_finite(g)) throw std::runtime_error("run_agd: non-finite gradient");
    Vec x_next = add_scaled(y, -1.0 / oracle.L(), g);
    const double beta = static_cast<double>(t) / static_cast<double>(t + 3);
    y = x_next;
    for (std::size_t i = 0; i < y.size(); ++i)
      y[i] += beta * (x_next[i] - result.x[i]);
    result.x = std::move(x_next);
    const double value = oracle.value(result.x);
    if (!std::isfinite(value))
      throw std::runtime_error("run_agd: non-finite objective value");
    detail::record_iter(result.trace, t + 1, value, oracle.true_gap(value),
                        oracle.total_calls());
  }
  return result;
}

// Subgradient descent with the fixed-horizon step size D/(G sqrt(T)),
// returning the best-value iterate seen. D must upper bound ||x0 - x*||.
// Trace rows carry the current value and the best gap so far (when known).
inline PhaseResult run_subgradient(const NonsmoothOracle& oracle, const Vec& x0,
                                   long long T, double D) {
  if (T < 0)
    throw std::invalid_argument("run_subgradient: negative iteration budget");
  if (!(D > 0.0)) throw std::invalid_argument("run_subgradient: D must be > 0");
  PhaseResult result;
  result.x = x0;
  if (T == 0) return result;

  const double eta = D / (oracle.G() * std::sqrt(static_cast<double>(T)));
  Vec x = x0;
  double best_value = oracle.value(x0);
  for (long long t = 1; t <= T; ++t) {
    Vec g = oracle.subgradient(x);
    if (!all_finite(g))
      throw std::runtime_error("run_subgradient: non-finite subgradient");
    x = add_scaled(x, -eta, g);
    const double value = oracle.value(x);
    if (!std::isfinite(value))
      throw std::runtime_error("run_subgradient: non-finite objective value");
    if (value < best_value) {
      best_value = value;
      result.x = x;
    }
    detail::record_iter(result.trace, t, value, oracle.true_gap(best_value),
                        oracle.total_calls());
  }
  return result;
}

struct MinimizeOptions {
  double eps = 1e-6;
  double agd_c = 2.0;          // constant in the accelerated rate
  std::optional<double> gap0;  // override for the initial gap bound
  int max_extra_phases = 64;   // safety cap beyond the planned schedule
};

struct MinimizeResult {
  Vec x;
  Trace trace;
  double gap0 = 0.0;            // initial gap bound the schedule was built from
  double certified_gap = 0.0;   // certificate at the returned point
  int planned_phases = 0;       // K
  long long planned_iterations = 0;
  int phases_run = 0;
  long long total_iterations = 0;
  double theoretical_bound = 0.0;  // closed-form iteration bound, configured c
  double agd_c_final = 0.0;        // c after any doublings
};

namespace detail {

// Strong-convexity certificate: f(x) - f* <= ||grad f(x)||^2 / (2 mu).
inline double gradient_certificate(const SmoothOracle& oracle, const Vec& x) {
  return squared_norm(oracle.gradient(x)) / (2.0 * oracle.mu());
}

inline void append_phase(Trace& trace, const Trace& phase_trace, int phase,
                         long long offset) {
  for (TraceRecord row : phase_trace) {
    row.phase = phase;
    row.global_iter += offset;
    trace.push_back(row);
  }
}

}  // namespace detail

// Restarted gradient / accelerated gradient descent for mu-strongly convex
// smooth objectives. Runs the halving schedule, certifying progress after
// each phase with the gradient-norm certificate; stops as soon as the
// certificate reaches eps. If a phase of the accelerated variant fails to
// halve the certified gap, the rate constant c is doubled for the remaining
// phases. Extra phases are appended if the planned schedule ends uncertified.
inline MinimizeResult restarted_minimize(ScheduleVariant variant,
                                         const SmoothOracle& oracle,
                                         const Vec& x0,
                                         const MinimizeOptions& opts) {
  if (variant == ScheduleVariant::subgrad)
    throw std::invalid_argument(
        "restarted_minimize: subgrad variant takes a NonsmoothOracle");
  if (!(oracle.mu() > 0.0))
    throw std::invalid_argument(
        "restarted_minimize: mu must be > 0 (use regularized_reduction)");
  if (!(opts.eps > 0.0))
    throw std::invalid_argument("restarted_minimize: eps must be > 0");

  MinimizeResult result;
  result.agd_c_final = opts.agd_c;
  result.x = x0;

  const double f0 = oracle.value(x0);
  double cert = detail::gradient_certificate(oracle, x0);
  result.gap0 = opts.gap0.value_or(cert);
  detail::record_iter(result.trace, 0, f0,
                      oracle.minimizer() ? oracle.true_gap(f0)
                                         : std::optional<double>(cert),
                      oracle.total_calls());

  ScheduleParams params;
  params.L = oracle.L();
  params.mu = oracle.mu();
  params.gap0 = result.gap0;
  params.eps = opts.eps;
  params.agd_c = opts.agd_c;

  const long long phase_iters_gd =
      static_cast<long long>(std::ceil(4.0 * oracle.L() / oracle.mu()));
  auto phase_iters_agd = [&](double c) {
    return static_cast<long long>(
        std::ceil(std::sqrt(4.0 * c * oracle.L() / oracle.mu())));
  };

  if (result.gap0 > opts.eps) {
    RestartSchedule schedule = halving_schedule(variant, params);
    result.planned_phases = schedule.phase_count();
    result.planned_iterations = schedule.total_iterations();

    double c = opts.agd_c;
    double prev_cert = cert;
    long long offset = 0;
    int phase = 0;
    while (true) {
      ++phase;
      long long iters;
      if (phase <= schedule.phase_count()) {
        iters = schedule.per_phase_iters[phase - 1];
      } else {
        if (phase > schedule.phase_count() + opts.max_extra_phases)
          throw std::runtime_error(
              "restarted_minimize: failed to certify target accuracy");
        iters = (variant == ScheduleVariant::gd) ? phase_iters_gd
                                                 : phase_iters_agd(c);
      }
      PhaseResult phase_result =
          (variant == ScheduleVariant::gd)
              ? run_gd(oracle, result.x, iters)
              : run_agd(oracle, result.x, iters);
      result.x = std::move(phase_result.x);
      detail::append_phase(result.trace, phase_result.trace, phase, offset);
      offset += iters;
      result.phases_run = phase;
      result.total_iterations = offset;

      cert = detail::gradient_certificate(oracle, result.x);
      if (!oracle.minimizer() && !result.trace.empty())
        result.trace.back().gap = cert;
      if (cert <= opts.eps) break;
      if (variant == ScheduleVariant::agd && cert > 0.5 * prev_cert) {
        // Certified gap failed to halve: the configured rate constant was
        // too optimistic, so double it for the remaining phases.
        c *= 2.0;
        result.agd_c_final = c;
        for (int l = phase; l < schedule.phase_count(); ++l)
          schedule.per_phase_iters[l] = phase_iters_agd(c);
      }
      prev_cert = cert;
    }
  }

  // at x0 the supplied initial bound certifies the gap as well
  result.certified_gap =
      result.phases_run == 0 ? std::min(cert, result.gap0) : cert;
  const int k = result.gap0 > 0.0 ? phase_count(result.gap0, opts.eps) : 0;
  result.theoretical_bound =
      (variant == ScheduleVariant::gd)
          ? static_cast<double>(phase_iters_gd) * k
          : static_cast<double>(phase_iters_agd(opts.agd_c)) * k;
  return result;
}

// Restarted subgradient descent for mu-strongly convex nonsmooth objectives.
// Phase l runs T_l = ceil(4 G^2 / (mu gap_l)) steps with radius
// D_l = sqrt(2 gap_l / mu), gap_l = gap0 2^-(l-1), and chains best iterates.
// gap0 comes from the options or from a known optimal value.
inline MinimizeResult restarted_minimize(const NonsmoothOracle& oracle,
                                         const Vec& x0,
                                         const MinimizeOptions& opts) {
  if (!(oracle.mu() > 0.0))
    throw std::invalid_argument("restarted_minimize: mu must be > 0");
  if (!(opts.eps > 0.0))
    throw std::invalid_argument("restarted_minimize: eps must be > 0");

  MinimizeResult result;
  result.agd_c_final = opts.agd_c;
  result.x = x0;

  const double f0 = oracle.value(x0);
  std::optional<double> cert = oracle.true_gap(f0);
  if (opts.gap0) {
    result.gap0 = *opts.gap0;
  } else if (cert) {
    result.gap0 = *cert;
  } else {
    throw std::invalid_argument(
        "restarted_minimize: gap0 required when the optimal value is unknown");
  }
  detail::record_iter(result.trace, 0, f0, cert, oracle.total_calls());

  const double G = oracle.G();
  const double mu = oracle.mu();
  result.theoretical_bound = std::ceil(8.0 * G * G / (opts.eps * mu));

  double best_value = f0;
  if (result.gap0 > opts.eps) {
    ScheduleParams params;
    params.G = G;
    params.mu = mu;
    params.gap0 = result.gap0;
    params.eps = opts.eps;
    RestartSchedule schedule = halving_schedule(ScheduleVariant::subgrad, params);
    result.planned_phases = schedule.phase_count();
    result.planned_iterations = schedule.total_iterations();

    long long offset = 0;
    double gap_est = result.gap0;
    int phase = 0;
    while (true) {
      ++phase;
      long long iters;
      if (phase <= schedule.phase_count()) {
        iters = schedule.per_phase_iters[phase - 1];
      } else {
        if (!cert) break;  // open-loop schedule exhausted
        if (phase > schedule.phase_count() + opts.max_extra_phases)
          throw std::runtime_error(
              "restarted_minimize: failed to certify target accuracy");
        gap_est = std::max(*cert, opts.eps);
        iters = static_cast<long long>(std::ceil(4.0 * G * G / (mu * gap_est)));
      }
      const double radius = std::sqrt(2.0 * gap_est / mu);
      PhaseResult phase_result =
          run_subgradient(oracle, result.x, iters, radius);
      result.x = std::move(phase_result.x);
      detail::append_phase(result.trace, phase_result.trace, phase, offset);
      offset += iters;
      result.phases_run = phase;
      result.total_iterations = offset;

      best_value = std::min(best_value, oracle.value(result.x));
      cert = oracle.true_gap(best_value);
      gap_est *= 0.5;
      if (cert && *cert <= opts.eps) break;
      if (!cert && phase >= schedule.phase_count()) break;
    }
  }

  // With a known optimum the certificate is exact; otherwise the halving
  // schedule itself certifies gap0 * 2^-K <= eps for the advertised constants.
  result.certified_gap =
      cert ? *cert
           : result.gap0 * std::pow(0.5, result.planned_phases);
  return result;
}

// The regularized auxiliary objective
//   f_eps(x) = f(x) + eps/(2 D^2) ||x - x0||^2,
// which is (L + eps/D^2)-smooth and (eps/D^2)-strongly convex. Holds its own
// copy of the base oracle.
inline SmoothOracle make_regularized(const SmoothOracle& oracle, const Vec& x0,
                                     double D, double eps) {
  if (!(D > 0.0)) throw std::invalid_argument("make_regularized: D must be > 0");
  if (!(eps > 0.0))
    throw std::invalid_argument("make_regularized: eps must be > 0");
  const double rho = eps / (2.0 * D * D);
  auto base = std::make_shared<SmoothOracle>(oracle);
  auto value = [base, x0, rho](const Vec& x) {
    double shift = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - x0[i];
      shift += d * d;
    }
    return base->value(x) + rho * shift;
  };
  auto gradient = [base, x0, rho](const Vec& x) {
    Vec g = base->gradient(x);
    for (std::size_t i = 0; i < g.size(); ++i)
      g[i] += 2.0 * rho * (x[i] - x0[i]);
    return g;
  };
  return SmoothOracle(oracle.dim(), oracle.L() + 2.0 * rho, 2.0 * rho, value,
                      gradient, std::nullopt, oracle.name() + "+reg");
}

struct ReductionResult {
  Vec x;
  Trace trace;
  double L_eff = 0.0;   // smoothness of the regularized objective
  double mu_eff = 0.0;  // strong convexity of the regularized objective
  double final_value = 0.0;
  long long total_iterations = 0;
  double theoretical_bound = 0.0;
  MinimizeResult inner;
};

// Reduction for L-smooth merely convex f with ||x0 - x*|| <= D: solve the
// regularized objective to eps/2 with restarted accelerated gradient descent;
// the returned point is eps-optimal for f.
inline ReductionResult regularized_reduction(const SmoothOracle& oracle,
                                             const Vec& x0, double D,
                                             double eps) {
  if (oracle.mu() > 0.0)
    throw std::invalid_argument(
        "regularized_reduction: oracle is strongly convex; restart it directly");
  SmoothOracle reg = make_regularized(oracle, x0, D, eps);

  ReductionResult result;
  result.L_eff = reg.L();
  result.mu_eff = reg.mu();

  MinimizeOptions opts;
  opts.eps = eps / 2.0;
  result.inner = restarted_minimize(ScheduleVariant::agd, reg, x0, opts);
  result.x = result.inner.x;
  result.trace = result.inner.trace;
  result.total_iterations = result.inner.total_iterations;
  result.theoretical_bound = result.inner.theoretical_bound;
  result.final_value = oracle.value(result.x);
  return result;
}

}  // namespace restarts
