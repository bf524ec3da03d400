#include "trcx/adaptive_solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>

#include "trcx/errors.hpp"
#include "trcx/model.hpp"
#include "trcx/trs.hpp"

namespace trcx {

std::string_view to_string(Branch b) { return b == Branch::K_g ? "K_g" : "K_H"; }

Branch parse_branch(std::string_view s) {
  if (s == "K_g") return Branch::K_g;
  if (s == "K_H") return Branch::K_H;
  throw InvalidInput("unknown branch '" + std::string(s) + "'");
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::first_order_stationary:
      return "first_order_stationary";
    case Status::second_order_stationary:
      return "second_order_stationary";
    case Status::max_iters:
      return "max_iters";
  }
  return "max_iters";
}

Status parse_status(std::string_view s) {
  if (s == "first_order_stationary") return Status::first_order_stationary;
  if (s == "second_order_stationary") return Status::second_order_stationary;
  if (s == "max_iters") return Status::max_iters;
  throw InvalidInput("unknown status '" + std::string(s) + "'");
}

SolveCounts count_trace(const std::vector<IterationRecord>& trace) {
  SolveCounts c;
  std::uint64_t run = 0;
  for (const auto& r : trace) {
    (r.success ? c.successful : c.unsuccessful)++;
    (r.branch == Branch::K_g ? c.kg : c.kh)++;
    run = r.success ? 0 : run + 1;
    c.longest_unsuccessful_run = std::max(c.longest_unsuccessful_run, run);
  }
  return c;
}

double radius_update1(double gamma, double grad_norm) { return gamma * grad_norm; }

std::pair<double, Branch> radius_update2(double gamma, double grad_norm, double lambda) {
  const double neg = std::abs(negative_part(lambda));
  if (lambda >= 0.0 || grad_norm * grad_norm >= neg * neg * neg) {
    return {gamma * grad_norm, Branch::K_g};
  }
  return {gamma * neg, Branch::K_H};
}

double rho(double f_k, double f_trial, double model_dec) {
  if (!(model_dec > 0.0)) {
    throw DegenerateModel("rho: predicted decrease is not positive");
  }
  return (f_k - f_trial) / model_dec;
}

std::pair<bool, double> accept_and_update_gamma(double rho_k, const SolverConfig& cfg,
                                                double gamma) {
  if (rho_k >= cfg.eta) {
    return {true, std::clamp(gamma * cfg.gamma_inc, cfg.gamma_lo, cfg.gamma_hi)};
  }
  return {false, cfg.gamma_c * gamma};
}

namespace {

struct Evaluated {
  double f;
  Vector g;
  SymMatrix h;
};

Evaluated evaluate_at(const ObjectiveOracle& p, const Vector& x, std::uint64_t k) {
  Evaluated e{p.eval_f(x), p.eval_g(x), p.eval_H(x)};
  if (!std::isfinite(e.f) || !e.g.allFinite() || !e.h.all_finite()) {
    std::ostringstream msg;
    msg << "objective '" << p.name << "' returned non-finite values at iteration " << k
        << ", x = [" << x.transpose() << "]";
    throw OracleFailure(msg.str());
  }
  return e;
}

}  // namespace

SolveResult solve(const ObjectiveOracle& problem, const Vector& x0, const SolverConfig& cfg) {
  cfg.validate();
  if (x0.size() != problem.dim) throw DimensionMismatch("solve: x0 has wrong dimension");

  SolveResult res;
  Vector x = x0;
  double gamma = cfg.gamma0;
  Evaluated cur = evaluate_at(problem, x, 0);
  res.f0 = cur.f;
  const Box& box = problem.constants.region;
  res.left_region = !box.contains(x);

  for (std::uint64_t k = 0;; ++k) {
    const EigenPair left = leftmost_eigenpair(cur.h);
    const double gnorm = cur.g.norm();

    const bool first_order = gnorm <= cfg.eps_g;
    std::optional<Status> stop;
    if (cfg.strategy == Strategy::update1 && first_order) {
      stop = Status::first_order_stationary;
    } else if (cfg.strategy == Strategy::update2 && first_order && left.value >= -cfg.eps_H) {
      stop = Status::second_order_stationary;
    } else if (k >= cfg.max_iters) {
      stop = Status::max_iters;
    }
    if (stop) {
      res.status = *stop;
      res.final_lambda = left.value;
      res.final_grad_norm = gnorm;
      break;
    }

    double delta = 0.0;
    Branch branch = Branch::K_g;
    if (cfg.strategy == Strategy::update1) {
      delta = radius_update1(gamma, gnorm);
    } else {
      std::tie(delta, branch) = radius_update2(gamma, gnorm, left.value);
    }

    const QuadraticModel m{cur.f, cur.g, cur.h};
    CauchyStep cp = branch == Branch::K_g ? cauchy_gradient(m, delta)
                                          : cauchy_eigen(m, delta, left);
    Vector step = std::move(cp.step);
    double dec = cp.model_decrease;
    if (cfg.step_kind == StepKind::exact) {
      TrsSolution ts = solve_exact(cur.g, cur.h, delta);
      const double dec_exact = model_decrease(m, ts.step);
      if (dec_exact >= dec && ts.step.norm() <= delta) {
        step = std::move(ts.step);
        dec = dec_exact;
      }
    }

    const Vector trial = x + step;
    const double f_trial = problem.eval_f(trial);
    if (!std::isfinite(f_trial)) {
      std::ostringstream msg;
      msg << "objective '" << problem.name
          << "' returned non-finite f at the trial point of iteration " << k;
      throw OracleFailure(msg.str());
    }
    if (!box.contains(trial)) res.left_region = true;

    const double rho_k = rho(cur.f, f_trial, dec);
    const auto [accepted, gamma_next] = accept_and_update_gamma(rho_k, cfg, gamma);

    IterationRecord rec;
    rec.k = k;
    rec.f = cur.f;
    rec.grad_norm = gnorm;
    rec.lambda_min = left.value;
    rec.branch = branch;
    rec.delta = delta;
    rec.gamma = gamma;
    rec.rho = rho_k;
    rec.model_dec = dec;
    rec.success = accepted;
    if (cfg.record_x) {
      rec.x = x;
      rec.step = step;
    }
    res.trace.push_back(std::move(rec));

    gamma = gamma_next;
    if (accepted) {
      x = trial;
      Evaluated next = evaluate_at(problem, x, k + 1);
      // Keep f_{k+1} bit-identical to the value that entered rho_k.
      next.f = f_trial;
      cur = std::move(next);
    }
  }

  res.x_final = x;
  res.final_f = cur.f;
  res.counts = count_trace(res.trace);
  return res;
}

}  // namespace trcx
