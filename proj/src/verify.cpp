#include "trcx/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "trcx/errors.hpp"

namespace trcx {

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "FAIL";
    case CheckStatus::not_applicable:
      return "n/a";
  }
  return "n/a";
}

bool VerifyReport::ok() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const Check& c) { return c.status == CheckStatus::fail; });
}

const Check* VerifyReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Accumulates per-row slacks into a single Check.
class CheckBuilder {
 public:
  explicit CheckBuilder(std::string name) { check_.name = std::move(name); check_.margin = kNaN; }

  // slack >= 0 passes.
  void observe(double slack, std::uint64_t k) {
    ++check_.evaluated;
    if (std::isnan(check_.margin) || slack < check_.margin) check_.margin = slack;
    if (!(slack >= 0.0) && first_bad_ == kNone) first_bad_ = k;
  }
  void observe(bool ok, std::uint64_t k) { observe(ok ? 0.0 : -1.0, k); }

  void skip() { ++skipped_; }
  void not_applicable(std::string why) {
    na_ = true;
    check_.detail = std::move(why);
  }

  Check finish() && {
    if (na_ || (check_.evaluated == 0 && skipped_ > 0)) {
      check_.status = CheckStatus::not_applicable;
      if (check_.detail.empty()) check_.detail = "no row inside the constants' region";
    } else if (first_bad_ != kNone) {
      check_.status = CheckStatus::fail;
      std::ostringstream d;
      d << "first violation at k = " << first_bad_;
      check_.detail = d.str();
    } else {
      check_.status = CheckStatus::pass;
      if (skipped_ > 0) {
        std::ostringstream d;
        d << skipped_ << " row(s) outside the constants' region skipped";
        check_.detail = d.str();
      }
    }
    return std::move(check_);
  }

 private:
  static constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();
  Check check_;
  std::uint64_t first_bad_ = kNone;
  std::uint64_t skipped_ = 0;
  bool na_ = false;
};

std::string fmt_g(double v) {
  std::ostringstream out;
  out << std::setprecision(6) << v;
  return out.str();
}

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

struct Region {
  std::vector<bool> iterate_ok;  // x_k inside the box
  std::vector<bool> segment_ok;  // x_k and the trial/next point inside the box
  bool all_ok = true;
  bool known = true;             // false when the trace has no x
};

Region adaptive_region(const std::vector<IterationRecord>& rows, const TraceSummary& s,
                       const Box& box) {
  Region r;
  for (const auto& row : rows) {
    if (!row.x) {
      r.known = false;
      break;
    }
  }
  if (!r.known) {
    r.all_ok = !s.left_region;
    r.iterate_ok.assign(rows.size(), r.all_ok);
    r.segment_ok.assign(rows.size(), r.all_ok);
    return r;
  }
  for (const auto& row : rows) {
    const bool in = box.contains(*row.x);
    const bool seg = in && (!row.step || box.contains(*row.x + *row.step));
    r.iterate_ok.push_back(in);
    r.segment_ok.push_back(seg);
    r.all_ok = r.all_ok && seg;
  }
  r.all_ok = r.all_ok && box.contains(s.x_final);
  return r;
}

Region fixed_region(const std::vector<FixedIterationRecord>& rows, const TraceSummary& s,
                    const Box& box) {
  Region r;
  for (const auto& row : rows) {
    if (!row.x) r.known = false;
  }
  if (!r.known) {
    r.all_ok = !s.left_region;
    r.iterate_ok.assign(rows.size(), r.all_ok);
    r.segment_ok.assign(rows.size(), r.all_ok);
    return r;
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Vector& next = k + 1 < rows.size() ? *rows[k + 1].x : s.x_final;
    const bool in = box.contains(*rows[k].x);
    r.iterate_ok.push_back(in);
    r.segment_ok.push_back(in && box.contains(next));
    r.all_ok = r.all_ok && r.segment_ok.back();
  }
  r.all_ok = r.all_ok && box.contains(s.x_final);
  return r;
}

void verify_adaptive(const TraceFile& t, const ProblemConstants& c, const VerifyOptions& opts,
                     VerifyReport& rep) {
  const auto& rows = std::get<std::vector<IterationRecord>>(t.rows);
  const auto& cfg = std::get<SolverConfig>(t.header.config);
  const TraceSummary& s = t.summary;
  const std::size_t n = rows.size();
  const Region region = adaptive_region(rows, s, c.region);
  if (!region.known) rep.warnings.push_back("trace has no x; using the solver's region flag");
  if (!region.all_ok) {
    rep.warnings.push_back(
        "iterates or trial points leave the constants' region; global bound checks are not "
        "applicable");
  }

  auto next_f = [&](std::size_t k) { return k + 1 < n ? rows[k + 1].f : s.final_f; };
  auto f_slack = [&](double f) { return opts.f_tol * std::max(1.0, std::abs(f)); };
  const double gmin = gamma_min(cfg, c);
  const double kmin = kappa_min(cfg.eta, gmin);

  {
    CheckBuilder b("bookkeeping");
    for (std::size_t k = 0; k < n; ++k) b.observe(rows[k].k == k, k);
    if (n > 0) b.observe(rows[0].gamma == cfg.gamma0, 0);
    b.observe(std::get<SolveCounts>(s.counts) == count_trace(rows), n);
    rep.checks.push_back(std::move(b).finish());
  }
  {
    CheckBuilder b("success_flag");
    for (std::size_t k = 0; k < n; ++k) b.observe(rows[k].success == (rows[k].rho >= cfg.eta), k);
    rep.checks.push_back(std::move(b).finish());
  }
  {
    CheckBuilder b("ratio_consistency");
    for (std::size_t k = 0; k < n; ++k) {
      b.observe(rows[k].model_dec > 0.0, k);
      if (!rows[k].success) continue;
      const double implied = (rows[k].f - next_f(k)) / rows[k].model_dec;
      b.observe(1e-9 - rel_diff(implied, rows[k].rho), k);
    }
    rep.checks.push_back(std::move(b).finish());
  }
  {
    CheckBuilder b("radius_rule");
    for (std::size_t k = 0; k < n; ++k) {
      const auto& r = rows[k];
      const double neg = std::abs(negative_part(r.lambda_min));
      Branch expected = Branch::K_g;
      if (cfg.strategy == Strategy::update2 && r.lambda_min < 0.0 &&
          r.grad_norm * r.grad_norm < neg * neg * neg) {
        expected = Branch::K_H;
      }
      b.observe(r.branch == expected, k);
      const double want = r.gamma * (r.branch == Branch::K_g ? r.grad_norm : neg);
      b.observe(1e-12 - rel_diff(r.delta, want), k);
      if (r.step) b.observe(r.delta * (1.0 + 1e-12) - r.step->norm(), k);
    }
    rep.checks.push_back(std::move(b).finish());
  }
  {
    CheckBuilder b("gamma_update");
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double g1 = rows[k + 1].gamma;
      if (rows[k].success) {
        b.observe(g1 >= cfg.gamma_lo && g1 <= cfg.gamma_hi, k);
        const double want = std::clamp(rows[k].gamma * cfg.gamma_inc, cfg.gamma_lo, cfg.gamma_hi);
        b.observe(1e-12 - rel_diff(g1, want), k);
      } else {
        b.observe(1e-12 - rel_diff(g1, cfg.gamma_c * rows[k].gamma), k);
      }
    }
    rep.checks.push_back(std::move(b).finish());
  }
  {
    CheckBuilder b("I7_monotonicity");
    for (std::size_t k = 0; k < n; ++k) {
      const double fn = next_f(k);
      if (rows[k].success) {
        b.observe(rows[k].f - fn, k);
      } else {
        b.observe(fn == rows[k].f, k);
        if (rows[k].x) {
          const Vector& xn = k + 1 < n ? *rows[k + 1].x : s.x_final;
          b.observe(xn == *rows[k].x, k);
        }
      }
    }
    rep.checks.push_back(std::move(b).finish());
  }
  {
    CheckBuilder b("I1_cauchy_decrease");
    for (std::size_t k = 0; k < n; ++k) {
      if (!region.iterate_ok[k]) {
        b.skip();
        continue;
      }
      const auto& r = rows[k];
      double bound = 0.0;
      if (r.branch == Branch::K_g) {
        bound = 0.5 * std::min(1.0 / (1.0 + c.kappa), r.gamma) * r.grad_norm * r.grad_norm;
      } else {
        const double neg = std::abs(negative_part(r.lambda_min));
        bound = 0.5 * r.gamma * r.gamma * neg * neg * neg;
      }
      b.observe(r.model_dec - bound + opts.model_tol, k);
    }
    rep.checks.push_back(std::move(b).finish());
  }
  {
    CheckBuilder b("I2_gamma_floor");
    if (!region.all_ok) {
      b.not_applicable("constants not valid on every visited point");
    } else {
      for (std::size_t k = 0; k < n; ++k) b.observe(rows[k].gamma - gmin * (1.0 - 1e-12), k);
    }
    Check ch = std::move(b).finish();
    ch.detail += (ch.detail.empty() ? "" : "; ") + std::string("gamma_min = ") + fmt_g(gmin);
    rep.checks.push_back(std::move(ch));
  }
  {
    CheckBuilder b("I3_f_decrease");
    if (!region.all_ok) {
      b.not_applicable("constants not valid on every visited point");
    } else {
      for (std::size_t k = 0; k < n; ++k) {
        const auto& r = rows[k];
        if (!r.success) continue;
        const double neg = std::abs(negative_part(r.lambda_min));
        const double q = r.branch == Branch::K_g ? r.grad_norm * r.grad_norm : neg * neg * neg;
        b.observe(r.f - next_f(k) - kmin * q + f_slack(r.f), k);
      }
    }
    rep.checks.push_back(std::move(b).finish());
  }
  {
    CheckBuilder b("I4_unsuccessful_run");
    if (!region.all_ok) {
      b.not_applicable("constants not valid on every visited point");
    } else {
      const Count cap = unsuccessful_run_cap(cfg, c);
      const auto longest = count_trace(rows).longest_unsuccessful_run;
      b.observe(static_cast<double>(cap) - static_cast<double>(longest), n);
    }
    rep.checks.push_back(std::move(b).finish());
  }
  {
    const bool first = cfg.strategy == Strategy::update1;
    CheckBuilder b(first ? "I5_first_order_count" : "I6_second_order_count");
    if (!region.all_ok) {
      b.not_applicable("constants not valid on every visited point");
      rep.checks.push_back(std::move(b).finish());
    } else {
      auto counted = [&](double gnorm, double lam) {
        if (gnorm > cfg.eps_g) return true;
        return !first && std::abs(negative_part(lam)) > cfg.eps_H;
      };
      Count observed = 0;
      for (const auto& r : rows) observed += counted(r.grad_norm, r.lambda_min) ? 1 : 0;
      if (s.status == Status::max_iters) {
        observed += counted(s.final_grad_norm, s.final_lambda) ? 1 : 0;
      }
      const Count bound = first
                              ? first_order_bound(t.header.f0, c, cfg, cfg.eps_g)
                              : second_order_bound(t.header.f0, c, cfg, cfg.eps_g, cfg.eps_H);
      b.observe(observed <= bound, n);
      Check ch = std::move(b).finish();
      ch.margin = static_cast<double>(bound) - static_cast<double>(observed);
      ch.detail = "observed " + std::to_string(observed) + " <= bound " + std::to_string(bound);
      rep.checks.push_back(std::move(ch));
    }
  }
  {
    CheckBuilder b("I8_model_error");
    for (std::size_t k = 0; k < n; ++k) {
      if (!region.segment_ok[k]) {
        b.skip();
        continue;
      }
      const auto& r = rows[k];
      const double err = std::abs(r.model_dec * (1.0 - r.rho));
      double bound = 0.0;
      if (r.branch == Branch::K_g) {
        bound = c.kappa * r.gamma * r.gamma * r.grad_norm * r.grad_norm;
      } else {
        const double neg = std::abs(negative_part(r.lambda_min));
        bound = c.L / 6.0 * r.gamma * r.gamma * r.gamma * neg * neg * neg;
      }
      b.observe(bound - err + f_slack(r.f), k);
    }
    rep.checks.push_back(std::move(b).finish());
  }
}

void verify_fixed(const TraceFile& t, const ProblemConstants& c, const ObjectiveOracle* oracle,
                  const VerifyOptions& opts, VerifyReport& rep) {
  const auto& rows = std::get<std::vector<FixedIterationRecord>>(t.rows);
  const auto& cfg = std::get<FixedConfig>(t.header.config);
  const TraceSummary& s = t.summary;
  const std::size_t n = rows.size();
  const double root_eps = std::sqrt(cfg.eps);
  const double delta = cfg.radius();
  const Region region = fixed_region(rows, s, c.region);
  const bool beta_ok = cfg.beta >= 0.5 * c.L;
  if (!region.known) rep.warnings.push_back("trace has no x; using the solver's region flag");
  if (!region.all_ok) {
    rep.warnings.push_back("iterates leave the constants' region; bound checks are not applicable");
  }
  if (!beta_ok) rep.warnings.push_back("beta is below L/2; Taylor-based checks are not applicable");
  auto f_slack = [&](double f) { return opts.f_tol * std::max(1.0, std::abs(f)); };

  {
    CheckBuilder b("bookkeeping");
    for (std::size_t k = 0; k < n; ++k) b.observe(rows[k].k == k, k);
    b.observe(std::get<FixedCounts>(s.counts) == count_trace(rows), n);
    for (std::size_t k = 0; k < n; ++k) {
      const double fn = k + 1 < n ? rows[k + 1].f : s.final_f;
      b.observe(1e-12 - rel_diff(rows[k].f_drop, rows[k].f - fn), k);
    }
    rep.checks.push_back(std::move(b).finish());
  }
  {
    CheckBuilder b("case_rule");
    for (std::size_t k = 0; k < n; ++k) {
      const auto& r = rows[k];
      b.observe(r.xi >= 0.0, k);
      b.observe(r.kase == (r.xi <= root_eps ? FixedCase::case1 : FixedCase::case2), k);
    }
    rep.checks.push_back(std::move(b).finish());
  }
  {
    CheckBuilder b("P1_case2_decrease");
    if (!beta_ok) b.not_applicable("beta < L/2");
    const double floor_drop = fixed_case2_min_drop(cfg.eps, cfg.beta);
    for (std::size_t k = 0; k < n && beta_ok; ++k) {
      const auto& r = rows[k];
      if (r.kase != FixedCase::case2) continue;
      if (!region.segment_ok[k]) {
        b.skip();
        continue;
      }
      const double b2 = cfg.beta * cfg.beta;
      const double sharp = r.xi * cfg.eps / (2.0 * b2) - std::pow(cfg.eps, 1.5) / (3.0 * b2);
      b.observe(r.f_drop - sharp + f_slack(r.f), k);
      b.observe(r.f_drop - floor_drop + 1e-12, k);
    }
    rep.checks.push_back(std::move(b).finish());
  }
  {
    CheckBuilder b("P2_case1_next_state");
    if (!beta_ok) b.not_applicable("beta < L/2");
    const double g_cap = 2.0 * cfg.eps / cfg.beta;
    const double lam_floor = -3.0 * root_eps;
    for (std::size_t k = 0; k < n && beta_ok; ++k) {
      if (rows[k].kase != FixedCase::case1) continue;
      if (!region.segment_ok[k]) {
        b.skip();
        continue;
      }
      const double gn = k + 1 < n ? rows[k + 1].grad_norm : s.final_grad_norm;
      const double ln = k + 1 < n ? rows[k + 1].lambda_min : s.final_lambda;
      b.observe(g_cap * (1.0 + 1e-9) + 1e-12 - gn, k);
      b.observe(ln - lam_floor + 1e-9 * std::max(1.0, std::abs(lam_floor)), k);
    }
    rep.checks.push_back(std::move(b).finish());
  }
  {
    CheckBuilder b("P3_case2_count");
    if (!region.all_ok || !beta_ok) {
      b.not_applicable("constants not valid on every visited point");
      rep.checks.push_back(std::move(b).finish());
    } else {
      const Count bound = fixed_case2_bound(t.header.f0, c.f_inf, cfg.eps, cfg.beta);
      const Count observed = count_trace(rows).case2;
      b.observe(observed <= bound, n);
      Check ch = std::move(b).finish();
      ch.margin = static_cast<double>(bound) - static_cast<double>(observed);
      ch.detail = "observed " + std::to_string(observed) + " <= bound " + std::to_string(bound);
      rep.checks.push_back(std::move(ch));
    }
  }
  {
    CheckBuilder b("P4_taylor_bounds");
    if (oracle == nullptr) {
      b.not_applicable("no objective available for sampling");
    } else if (!beta_ok) {
      b.not_applicable("beta < L/2");
    } else {
      std::mt19937_64 rng(opts.seed);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      std::normal_distribution<double> normal(0.0, 1.0);
      const Box& box = c.region;
      const Eigen::Index dim = box.lo.size();
      const double width = (box.hi - box.lo).minCoeff();
      const double max_len = std::min(std::max(delta, 0.05 * width), 0.5 * width);
      int done = 0;
      for (int attempt = 0; done < opts.taylor_samples && attempt < 100 * opts.taylor_samples;
           ++attempt) {
        Vector x(dim), dir(dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
          x[i] = box.lo[i] + unit(rng) * (box.hi[i] - box.lo[i]);
          dir[i] = normal(rng);
        }
        const Vector step = dir.normalized() * (unit(rng) * max_len);
        if (!box.contains(x + step)) continue;
        ++done;
        const double f0 = oracle->eval_f(x);
        const Vector g0 = oracle->eval_g(x);
        const SymMatrix h0 = oracle->eval_H(x);
        const double sn = step.norm();
        const double scale = 1e-10 * (1.0 + std::abs(f0) + g0.norm() * sn + std::abs(h0.quad_form(step)));
        const double lhs_a = (oracle->eval_g(x + step) - g0 - h0 * step).norm();
        b.observe(cfg.beta * sn * sn - lhs_a + scale, static_cast<std::uint64_t>(done));
        const double lhs_b = oracle->eval_f(x + step) - f0 - g0.dot(step) - 0.5 * h0.quad_form(step);
        b.observe(cfg.beta / 3.0 * sn * sn * sn - lhs_b + scale, static_cast<std::uint64_t>(done));
      }
    }
    rep.checks.push_back(std::move(b).finish());
  }
}

}  // namespace

VerifyReport verify_trace(const TraceFile& trace, const ProblemConstants& constants,
                          const ObjectiveOracle* oracle, const VerifyOptions& opts) {
  VerifyReport rep;
  if (trace.header.is_fixed()) {
    verify_fixed(trace, constants, oracle, opts, rep);
  } else {
    verify_adaptive(trace, constants, opts, rep);
  }
  return rep;
}

}  // namespace trcx
