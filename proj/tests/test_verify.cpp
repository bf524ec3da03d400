#include <doctest.h>

#include "trcx/harness.hpp"
#include "trcx/verify.hpp"

using namespace trcx;

namespace {

TraceFile adaptive_trace(const std::string& problem, const std::string& strategy, Vector x0) {
  ExperimentSpec s;
  s.problem = problem;
  s.strategy = strategy;
  s.solver.eps_g = 1e-6;
  s.solver.gamma_hi = 1.0;
  s.solver.gamma0 = problem == "camel6" ? 0.1 : 1.0;
  s.x0 = std::move(x0);
  return run_experiment(s);
}

std::vector<IterationRecord>& rows_of(TraceFile& t) {
  return std::get<std::vector<IterationRecord>>(t.rows);
}

CheckStatus status_of(const VerifyReport& r, const char* name) {
  const Check* c = r.find(name);
  REQUIRE(c != nullptr);
  return c->status;
}

}  // namespace

TEST_CASE("clean traces pass every check") {
  for (const std::string p : {"saddle", "camel6"}) {
    for (const std::string st : {"update1", "update2"}) {
      CAPTURE(p);
      CAPTURE(st);
      const TraceFile t = adaptive_trace(p, st, Vector{{0.4, 0.3}});
      const ObjectiveOracle o = builtin(p, 2);
      const VerifyReport r = verify_trace(t, t.header.constants, &o);
      for (const auto& c : r.checks) {
        CAPTURE(c.name);
        CHECK(c.status == CheckStatus::pass);
      }
      CHECK(r.ok());
      CHECK(r.warnings.empty());
    }
  }
}

TEST_CASE("a corrupted rho is caught") {
  TraceFile t = adaptive_trace("saddle", "update1", Vector{{0.4, 0.3}});
  auto& rows = rows_of(t);
  std::size_t k = 0;
  while (!rows[k].success) ++k;
  rows[k].rho *= 1.5;
  const VerifyReport r = verify_trace(t, t.header.constants);
  CHECK_FALSE(r.ok());
  CHECK(status_of(r, "ratio_consistency") == CheckStatus::fail);
}

TEST_CASE("a rho flipped across eta breaks the success flag") {
  TraceFile t = adaptive_trace("saddle", "update1", Vector{{0.4, 0.3}});
  rows_of(t)[0].rho = -1.0;
  CHECK(status_of(verify_trace(t, t.header.constants), "success_flag") == CheckStatus::fail);
}

TEST_CASE("f moving the wrong way breaks monotonicity") {
  TraceFile t = adaptive_trace("saddle", "update2", Vector::Zero(2));
  const auto& rows = rows_of(t);
  REQUIRE(rows.size() > 2);
  bool saw_fail = false, saw_success = false;
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    TraceFile u = t;
    auto& ur = rows_of(u);
    if (ur[k].success) {
      ur[k + 1].f = ur[k].f + 1e-3;
      saw_success = true;
    } else {
      ur[k + 1].f -= 1e-3;
      saw_fail = true;
    }
    CHECK(status_of(verify_trace(u, u.header.constants), "I7_monotonicity") == CheckStatus::fail);
  }
  CHECK(saw_success);
  CHECK(saw_fail);
}

TEST_CASE("a wrong gamma or radius is caught") {
  TraceFile t = adaptive_trace("saddle", "update2", Vector::Zero(2));
  rows_of(t)[1].gamma *= 3.0;
  const VerifyReport r = verify_trace(t, t.header.constants);
  CHECK(status_of(r, "gamma_update") == CheckStatus::fail);
  CHECK(status_of(r, "radius_rule") == CheckStatus::fail);
}

TEST_CASE("understated constants are detected by the model error check") {
  const TraceFile t = adaptive_trace("saddle", "update2", Vector::Zero(2));
  ProblemConstants lie = t.header.constants;
  lie.L = 1e-3;
  lie.kappa = 1e-3;
  const VerifyReport r = verify_trace(t, lie);
  CHECK(status_of(r, "I8_model_error") == CheckStatus::fail);
}

TEST_CASE("leaving the region makes bound checks not applicable") {
  ExperimentSpec s;
  s.problem = "rosenbrock";
  s.solver.eps_g = 1e-3;  // default gamma_hi lets trial points leave |x| <= 5
  const TraceFile t = run_experiment(s);
  REQUIRE(t.summary.left_region);
  const VerifyReport r = verify_trace(t, t.header.constants);
  CHECK(r.ok());
  CHECK_FALSE(r.warnings.empty());
  CHECK(status_of(r, "I2_gamma_floor") == CheckStatus::not_applicable);
  CHECK(status_of(r, "I5_first_order_count") == CheckStatus::not_applicable);
  CHECK(status_of(r, "bookkeeping") == CheckStatus::pass);
}

TEST_CASE("fixed traces: clean pass and corrupted case tag") {
  ExperimentSpec s;
  s.problem = "saddle";
  s.strategy = "fixed";
  s.fixed.eps = 0.01;
  s.x0 = Vector::Zero(2);
  TraceFile t = run_experiment(s);
  const ObjectiveOracle o = builtin("saddle", 2);
  VerifyOptions opts;
  opts.seed = 5;
  const VerifyReport r = verify_trace(t, t.header.constants, &o, opts);
  for (const auto& c : r.checks) {
    CAPTURE(c.name);
    CHECK(c.status == CheckStatus::pass);
  }
  CHECK(r.find("P4_taylor_bounds")->evaluated > 0);

  auto& rows = std::get<std::vector<FixedIterationRecord>>(t.rows);
  rows[0].kase = FixedCase::case1;
  CHECK(status_of(verify_trace(t, t.header.constants), "case_rule") == CheckStatus::fail);
}

TEST_CASE("fixed method with beta below L/2 skips the Taylor-based checks") {
  ExperimentSpec s;
  s.problem = "saddle";
  s.strategy = "fixed";
  s.beta_from_problem = false;
  s.fixed.beta = 1.0;
  s.fixed.eps = 0.01;
  s.x0 = Vector::Zero(2);
  const TraceFile t = run_experiment(s);
  const VerifyReport r = verify_trace(t, t.header.constants);
  CHECK(status_of(r, "P1_case2_decrease") == CheckStatus::not_applicable);
  CHECK(status_of(r, "P3_case2_count") == CheckStatus::not_applicable);
  CHECK_FALSE(r.warnings.empty());
}
