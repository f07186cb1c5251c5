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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include "oracle_checks.hpp"
#include "restarts/oracles.hpp"
#include "restarts/smooth.hpp"

using namespace restarts;

TEST_CASE("gd_step on simple quadratics") {
  const SmoothOracle simple = make_diagonal_quadratic({1.0});
  CHECK(gd_step(simple, {1.0})[0] == 0.0);

  const SmoothOracle pair = make_diagonal_quadratic({1.0, 10.0});
  const Vec next = gd_step(pair, {1.0, 1.0});
  CHECK(next[0] == Catch::Approx(0.9));
  CHECK(next[1] == 0.0);

  // stationary point is a fixed point
  const Vec zero{0.0, 0.0};
  CHECK(gd_step(pair, zero) == zero);
}

TEST_CASE("gd_step rejects non-finite gradients") {
  const SmoothOracle bad(1, 1.0, 0.0, [](const Vec&) { return 0.0; },
                         [](const Vec&) { return Vec{std::nan("")}; });
  CHECK_THROWS_AS(gd_step(bad, {1.0}), std::runtime_error);
}

TEST_CASE("run_gd basics") {
  const SmoothOracle oracle = make_diagonal_quadratic({1.0});
  const PhaseResult empty = run_gd(oracle, {1.0}, 0);
  CHECK(empty.x == Vec{1.0});
  CHECK(empty.trace.empty());

  const PhaseResult one = run_gd(oracle, {1.0}, 1);
  CHECK(one.trace.size() == 1);
  CHECK(one.trace[0].objective_value == 0.0);
}

TEST_CASE("run_gd halves the gap within 40 steps on the (1,10) quadratic") {
  const SmoothOracle oracle = make_diagonal_quadratic({1.0, 10.0});
  const Vec x0{1.0, 1.0};
  const double f0 = oracle.value(x0);
  const PhaseResult res = run_gd(oracle, x0, 40);
  CHECK(res.trace.back().objective_value <= 0.5 * f0);
}

TEST_CASE("run_gd satisfies the descent property and the 1/t rate") {
  for (const SmoothOracle& oracle :
       {make_diagonal_quadratic({1.0, 10.0}),
        make_conditioned_quadratic(100.0, 1.0, 5), make_log_sum_exp()}) {
    const Vec x0(oracle.dim(), 1.0);
    const PhaseResult res = run_gd(oracle, x0, 50);
    double prev = oracle.value(x0);
    const double dist0 =
        squared_norm(subtract(x0, oracle.minimizer()->x_star));
    for (const TraceRecord& row : res.trace) {
      CHECK(row.objective_value <= prev + 1e-12);
      prev = row.objective_value;
      // f(x_t) - f* <= L ||x0 - x*||^2 / t
      REQUIRE(row.gap.has_value());
      CHECK(*row.gap <= oracle.L() * dist0 / row.global_iter + 1e-12);
    }
  }
}

TEST_CASE("run_agd basics") {
  const SmoothOracle oracle = make_diagonal_quadratic({1.0});
  CHECK(run_agd(oracle, {1.0}, 0).trace.empty());

  // the first accelerated step coincides with a gradient step
  const PhaseResult one = run_agd(oracle, {1.0}, 1);
  CHECK(one.x[0] == 0.0);
}

TEST_CASE("run_agd halves the gap in sqrt(8 L / mu) steps") {
  const SmoothOracle oracle = make_diagonal_quadratic({1.0, 100.0});
  const Vec x0{1.0, 1.0};
  const double f0 = oracle.value(x0);
  const long long T = static_cast<long long>(std::ceil(std::sqrt(800.0)));
  REQUIRE(T == 29);
  const PhaseResult res = run_agd(oracle, x0, T);
  CHECK(res.trace.back().objective_value <= 0.5 * f0);
}

TEST_CASE("run_agd satisfies the accelerated rate with c = 2") {
  for (const SmoothOracle& oracle :
       {make_diagonal_quadratic({1.0, 10.0}),
        make_conditioned_quadratic(50.0, 0.5, 4)}) {
    const Vec x0(oracle.dim(), 1.0);
    const double dist0 =
        squared_norm(subtract(x0, oracle.minimizer()->x_star));
    const PhaseResult res = run_agd(oracle, x0, 60);
    for (const TraceRecord& row : res.trace) {
      REQUIRE(row.gap.has_value());
      const double t = static_cast<double>(row.global_iter);
      CHECK(*row.gap <= 2.0 * oracle.L() * dist0 / (t * t) + 1e-12);
    }
  }
}

TEST_CASE("run_subgradient stays put at the optimum of |x|") {
  const NonsmoothOracle oracle = make_abs_plus_quadratic(0.0);  // plain |x|
  for (long long T : {1LL, 10LL, 64LL}) {
    const PhaseResult res = run_subgradient(oracle, {0.0}, T, 1.0);
    CHECK(res.x[0] == 0.0);
  }
}

TEST_CASE("run_subgradient reaches the base rate G D / sqrt(T)") {
  const NonsmoothOracle absq = make_abs_plus_quadratic(1.0);  // G = 2 on [-1,1]
  const PhaseResult a = run_subgradient(absq, {1.0}, 64, 1.0);
  CHECK(absq.value(a.x) <= 2.0 * 1.0 / 8.0);  // 0.25

  const NonsmoothOracle pw = make_piecewise_max();  // G = 2
  const PhaseResult b = run_subgradient(pw, {1.0}, 100, 1.0);
  CHECK(pw.value(b.x) <= 2.0 / 10.0);  // 0.2
}

TEST_CASE("run_subgradient with zero budget returns the start point") {
  const NonsmoothOracle oracle = make_abs_plus_quadratic(1.0);
  const PhaseResult res = run_subgradient(oracle, {0.7}, 0, 1.0);
  CHECK(res.x == Vec{0.7});
  CHECK(res.trace.empty());
}

TEST_CASE("restarted gd certifies eps within the closed-form bound") {
  const SmoothOracle oracle = make_diagonal_quadratic({1.0, 10.0});
  const Vec x0{1.0, 1.0};
  MinimizeOptions opts;
  opts.eps = 1e-6;
  const MinimizeResult res =
      restarted_minimize(ScheduleVariant::gd, oracle, x0, opts);

  CHECK(res.certified_gap <= 1e-6);
  CHECK(*oracle.true_gap(oracle.value(res.x)) <= 1e-6);
  // within the bound computed from the true initial gap
  const double f0 = oracle.value(x0);
  const double bound = 40.0 * std::ceil(std::log2(f0 / 1e-6));
  CHECK(static_cast<double>(res.total_iterations) <= bound);
  CHECK(static_cast<double>(res.total_iterations) <= res.theoretical_bound);
}

TEST_CASE("every restarted gd phase halves the true gap") {
  const SmoothOracle oracle = make_conditioned_quadratic(100.0, 1.0, 8);
  const Vec x0(8, 1.0);
  MinimizeOptions opts;
  opts.eps = 1e-8;
  const MinimizeResult res =
      restarted_minimize(ScheduleVariant::gd, oracle, x0, opts);

  double phase_start = *res.trace.front().gap;
  int phase = 1;
  for (std::size_t i = 1; i < res.trace.size(); ++i) {
    if (res.trace[i].phase != phase) {
      const double phase_end = *res.trace[i - 1].gap;
      CHECK(phase_end <= 0.5 * phase_start);
      phase_start = phase_end;
      phase = res.trace[i].phase;
    }
  }
  CHECK(*res.trace.back().gap <= 0.5 * phase_start);
}

TEST_CASE("restarted agd needs fewer iterations than restarted gd") {
  const SmoothOracle oracle = make_diagonal_quadratic({1.0, 10.0});
  const Vec x0{1.0, 1.0};
  MinimizeOptions opts;
  opts.eps = 1e-6;
  const MinimizeResult gd =
      restarted_minimize(ScheduleVariant::gd, oracle, x0, opts);
  const MinimizeResult agd =
      restarted_minimize(ScheduleVariant::agd, oracle, x0, opts);
  CHECK(agd.certified_gap <= 1e-6);
  CHECK(agd.total_iterations < gd.total_iterations);
}

TEST_CASE("restarted subgradient descent meets the 8G^2/(eps mu) budget") {
  const NonsmoothOracle oracle = make_abs_plus_quadratic(1.0);
  MinimizeOptions opts;
  opts.eps = 0.1;
  const MinimizeResult res = restarted_minimize(oracle, {1.0}, opts);
  CHECK(res.certified_gap <= 0.1);
  CHECK(res.theoretical_bound == 320.0);  // ceil(8 * 4 / (0.1 * 1))
  CHECK(static_cast<double>(res.total_iterations) <= 320.0);
}

TEST_CASE("restarted subgradient without a gap bound is rejected") {
  const NonsmoothOracle anonymous(
      1, 2.0, 1.0, [](const Vec& x) { return std::abs(x[0]); },
      [](const Vec& x) { return Vec{x[0] >= 0 ? 1.0 : -1.0}; });
  MinimizeOptions opts;
  opts.eps = 0.1;
  CHECK_THROWS_AS(restarted_minimize(anonymous, {1.0}, opts),
                  std::invalid_argument);
  opts.gap0 = 1.0;  // supplied by the caller: runs the open-loop schedule
  const MinimizeResult res = restarted_minimize(anonymous, {1.0}, opts);
  CHECK(res.certified_gap <= 0.1);
}

TEST_CASE("restarted_minimize rejects mu = 0") {
  const SmoothOracle oracle = make_log_sum_exp();
  MinimizeOptions opts;
  opts.eps = 0.1;
  CHECK_THROWS_AS(restarted_minimize(ScheduleVariant::gd, oracle, {2.0}, opts),
                  std::invalid_argument);
}

TEST_CASE("regularized objective carries the advertised constants") {
  const SmoothOracle oracle = make_flat_quadratic(1.0, 2);  // f = x1^2/2
  const SmoothOracle reg = make_regularized(oracle, {1.0, 1.0}, 1.0, 0.2);
  CHECK(reg.L() == Catch::Approx(1.2));
  CHECK(reg.mu() == Catch::Approx(0.2));
  // value and gradient of the regularized objective at a probe point
  const Vec probe{0.5, 2.0};
  CHECK(reg.value(probe) ==
        Catch::Approx(0.5 * 0.25 + 0.1 * (0.25 + 1.0)));
  const Vec g = reg.gradient(probe);
  CHECK(g[0] == Catch::Approx(0.5 + 0.2 * (0.5 - 1.0)));
  CHECK(g[1] == Catch::Approx(0.2 * (2.0 - 1.0)));
}

TEST_CASE("regularized_reduction returns immediately at a minimizer") {
  const SmoothOracle oracle(1, 1.0, 0.0,
                            [](const Vec& x) { return 0.5 * x[0] * x[0]; },
                            [](const Vec& x) { return Vec{x[0]}; },
                            KnownMinimizer{{0.0}, 0.0});
  const ReductionResult res = regularized_reduction(oracle, {0.0}, 1.0, 0.1);
  CHECK(res.x == Vec{0.0});
  CHECK(res.total_iterations == 0);
  CHECK(res.inner.certified_gap == 0.0);
}

TEST_CASE("regularized_reduction solves log-sum-exp to eps") {
  const SmoothOracle oracle = make_log_sum_exp();
  const ReductionResult res = regularized_reduction(oracle, {2.0}, 2.0, 1e-2);
  CHECK(res.final_value <= std::log(2.0) + 1e-2);
  CHECK(res.mu_eff == Catch::Approx(1e-2 / 4.0));
  CHECK(res.L_eff == Catch::Approx(1.0 + 1e-2 / 4.0));
}

TEST_CASE("regularized_reduction rejects bad inputs") {
  const SmoothOracle flat = make_flat_quadratic(1.0, 2);
  CHECK_THROWS_AS(regularized_reduction(flat, {1.0, 1.0}, 0.0, 0.1),
                  std::invalid_argument);
  const SmoothOracle strong = make_diagonal_quadratic({1.0, 2.0});
  CHECK_THROWS_AS(regularized_reduction(strong, {1.0, 1.0}, 1.0, 0.1),
                  std::invalid_argument);
}

TEST_CASE("finite differences agree with oracle gradients") {
  const SmoothOracle simple = make_diagonal_quadratic({1.0});
  CHECK(finite_difference_check(simple, {1.0}, 1e-5) <= 1e-8);

  const SmoothOracle pair = make_diagonal_quadratic({1.0, 10.0});
  CHECK(finite_difference_check(pair, {1.0, 1.0}, 1e-5) <= 1e-6);

  const SmoothOracle zero(1, 1.0, 0.0, [](const Vec&) { return 0.0; },
                          [](const Vec&) { return Vec{0.0}; });
  CHECK(finite_difference_check(zero, {3.0}, 1e-5) == 0.0);

  CHECK_THROWS_AS(finite_difference_check(simple, {1.0}, 0.0),
                  std::invalid_argument);
}

TEST_CASE("built-in oracles satisfy the first-order inequalities") {
  using namespace restarts::testing;
  for (const SmoothOracle& oracle :
       {make_diagonal_quadratic({1.0, 10.0}),
        make_conditioned_quadratic(1000.0, 1.0, 20), make_log_sum_exp(),
        make_flat_quadratic(1.0, 3)}) {
    CAPTURE(oracle.name());
    CHECK(check_convexity(oracle, 100, 7));
    CHECK(check_smoothness(oracle, 100, 11));
    if (oracle.mu() > 0.0) {
      CHECK(check_strong_convexity(oracle, 100, 13));
      CHECK(check_primal_distance_bound(oracle, 100, 17));
    }
    const Vec probe(oracle.dim(), 0.75);
    CHECK(relative_fd_error(oracle, probe, 1e-5) <= 1e-5);
  }
}

TEST_CASE("oracle counters track every query") {
  const SmoothOracle oracle = make_diagonal_quadratic({1.0, 10.0});
  oracle.reset_counters();
  oracle.value({1.0, 1.0});
  oracle.gradient({1.0, 1.0});
  oracle.gradient({0.5, 0.5});
  CHECK(oracle.value_calls() == 1);
  CHECK(oracle.gradient_calls() == 2);
  CHECK(oracle.total_calls() == 3);
}
