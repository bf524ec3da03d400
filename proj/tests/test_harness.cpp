#include <doctest.h>

#include <cmath>
#include <sstream>

#include "trcx/bounds.hpp"
#include "trcx/errors.hpp"
#include "trcx/harness.hpp"

using namespace trcx;

TEST_CASE("spec validation happens before any run") {
  ExperimentSpec s;
  s.problem = "";
  CHECK_THROWS_AS(s.validate(false), InvalidInput);
  s.problem = "saddle";
  s.eps_grid = {};
  CHECK_THROWS_AS(sweep(s), InvalidInput);
  s.eps_grid = {1e-2, 1e-2};
  CHECK_THROWS_AS(sweep(s), InvalidInput);
  s.eps_grid = {1e-2, -1e-3};
  CHECK_THROWS_AS(sweep(s), InvalidInput);
  s.eps_grid = {1e-2};
  s.strategy = "update3";
  CHECK_THROWS_AS(sweep(s), InvalidInput);
  s.strategy = "update1";
  s.solver.eta = 2.0;
  CHECK_THROWS_AS(run_experiment(s), InvalidInput);
  s = ExperimentSpec{};
  s.problem = "saddle";
  s.x0 = Vector::Zero(3);
  CHECK_THROWS_AS(run_experiment(s), InvalidInput);
}

TEST_CASE("run summaries") {
  ExperimentSpec s;
  s.problem = "quadratic";
  s.dim = 4;
  s.solver.eps_g = 1e-8;
  const TraceFile t = run_experiment(s);
  CHECK(t.summary.status == Status::first_order_stationary);
  CHECK(one_line_summary(t).rfind("status=first_order_stationary iters=", 0) == 0);

  s.problem = "saddle";
  s.dim = 2;
  s.x0 = Vector::Zero(2);
  const TraceFile z = run_experiment(s);
  CHECK(std::get<std::vector<IterationRecord>>(z.rows).empty());
  CHECK(z.summary.final_lambda < 0.0);
}

TEST_CASE("log-log slope fit") {
  const std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4};
  std::vector<double> counts;
  for (double e : eps) counts.push_back(7.0 * std::pow(e, -2.0));
  CHECK(fit_loglog_slope(eps, counts) == doctest::Approx(2.0));
  CHECK(std::isnan(fit_loglog_slope({1e-2}, {3.0})));
  CHECK(std::isnan(fit_loglog_slope({1e-2, 1e-3}, {0.0, 0.0})));
}

TEST_CASE("fixed sweep on saddle respects the case-2 cap") {
  ExperimentSpec s;
  s.problem = "saddle";
  s.strategy = "fixed";
  s.x0 = Vector::Zero(2);
  s.eps_grid = {0.04, 0.01, 0.0025};
  std::ostringstream csv;
  const SweepSummary sum = sweep(s, &csv);
  REQUIRE(sum.rows.size() == 3);
  CHECK(sum.within_bounds());
  const ObjectiveOracle o = builtin("saddle", 2);
  const double beta = 0.5 * o.constants.L;
  for (const auto& r : sum.rows) {
    CHECK(r.constants_valid);
    CHECK(r.kh == r.iters - r.kg);
    const double cap = (0.0 - o.constants.f_inf) * 6.0 * beta * beta / std::pow(r.eps, 1.5);
    CHECK(static_cast<double>(r.kh) <= cap);
    CHECK(r.bound == fixed_case2_bound(0.0, o.constants.f_inf, r.eps, beta));
  }
  std::istringstream lines(csv.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == kSweepCsvHeader);
  int n = 0;
  for (std::string line; std::getline(lines, line);) ++n;
  CHECK(n == 3);
}

TEST_CASE("update1 sweep on rosenbrock stays under the first-order cap") {
  ExperimentSpec s;
  s.problem = "rosenbrock";
  s.solver.gamma0 = 1.0;
  s.solver.gamma_hi = 1.0;
  s.eps_grid = {1e-2, 1e-3, 1e-4, 1e-5};
  const SweepSummary sum = sweep(s);
  CHECK(sum.within_bounds());
  for (const auto& r : sum.rows) {
    CHECK(r.constants_valid);
    CHECK(r.status == Status::first_order_stationary);
    CHECK(r.iters <= r.bound);
  }
  CHECK(sum.slope <= 2.3);
}

TEST_CASE("a missing problem file fails before any row is written") {
  ExperimentSpec s;
  s.problem_file = "/nonexistent/problem.json";
  s.eps_grid = {1e-1, 1e-2};
  std::ostringstream csv;
  CHECK_THROWS_AS(sweep(s, &csv), InvalidInput);
  CHECK(csv.str().empty());
}
