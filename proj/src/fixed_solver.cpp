#include "trcx/fixed_solver.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "trcx/errors.hpp"
#include "trcx/trs.hpp"

namespace trcx {

std::string_view to_string(FixedCase c) { return c == FixedCase::case1 ? "case1" : "case2"; }

FixedCase parse_fixed_case(std::string_view s) {
  if (s == "case1") return FixedCase::case1;
  if (s == "case2") return FixedCase::case2;
  throw InvalidInput("unknown case '" + std::string(s) + "'");
}

FixedCounts count_trace(const std::vector<FixedIterationRecord>& trace) {
  FixedCounts c;
  for (const auto& r : trace) (r.kase == FixedCase::case1 ? c.case1 : c.case2)++;
  return c;
}

FixedSolveResult solve_fixed(const ObjectiveOracle& problem, const Vector& x0,
                             const FixedConfig& cfg) {
  cfg.validate();
  if (x0.size() != problem.dim) throw DimensionMismatch("solve_fixed: x0 has wrong dimension");

  const double root_eps = std::sqrt(cfg.eps);
  const double delta = cfg.radius();
  const double g_target = 2.0 * cfg.eps / cfg.beta;
  const double lambda_target = -3.0 * root_eps;
  const Box& box = problem.constants.region;

  FixedSolveResult res;
  Vector x = x0;
  double f = problem.eval_f(x);
  res.f0 = f;
  res.left_region = !box.contains(x);

  for (std::uint64_t k = 0;; ++k) {
    const Vector g = problem.eval_g(x);
    const SymMatrix h = problem.eval_H(x);
    if (!std::isfinite(f) || !g.allFinite() || !h.all_finite()) {
      throw OracleFailure("objective '" + problem.name + "' returned non-finite values at iteration " +
                          std::to_string(k));
    }
    const double gnorm = g.norm();
    const double lam = leftmost_eigenpair(h).value;

    const bool done = gnorm <= g_target && lam >= lambda_target;
    if (done || k >= cfg.max_iters) {
      res.status = done ? Status::second_order_stationary : Status::max_iters;
      res.final_grad_norm = gnorm;
      res.final_lambda = lam;
      break;
    }

    TrsSolution sol;
    try {
      sol = solve_exact(g, h, delta, {cfg.trs_tol, 200});
    } catch (const NumericalFailure& e) {
      std::ostringstream msg;
      msg << "iteration " << k << " at x = [" << x.transpose() << "]: " << e.what();
      throw NumericalFailure(msg.str());
    }

    const Vector next = x + sol.step;
    const double f_next = problem.eval_f(next);

    FixedIterationRecord rec;
    rec.k = k;
    rec.f = f;
    rec.grad_norm = gnorm;
    rec.lambda_min = lam;
    rec.xi = sol.multiplier;
    rec.kase = sol.multiplier <= root_eps ? FixedCase::case1 : FixedCase::case2;
    rec.f_drop = f - f_next;
    if (cfg.record_x) rec.x = x;
    res.trace.push_back(std::move(rec));

    x = next;
    f = f_next;
    if (!box.contains(x)) res.left_region = true;
  }

  res.x_final = x;
  res.final_f = f;
  res.counts = count_trace(res.trace);
  return res;
}

}  // namespace trcx
