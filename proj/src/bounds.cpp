#include "trcx/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trcx/errors.hpp"

namespace trcx {

Box Box::cube(Eigen::Index n, double half_width) {
  return {Vector::Constant(n, -half_width), Vector::Constant(n, half_width)};
}

bool Box::contains(const Vector& x, double slack) const {
  if (x.size() != lo.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lo[i] - slack && x[i] <= hi[i] + slack)) return false;
  }
  return true;
}

double gamma_min(const SolverConfig& cfg, const ProblemConstants& c) {
  double g = std::min(cfg.gamma_lo, cfg.gamma_c / (1.0 + c.kappa));
  if (c.kappa > 0.0) g = std::min(g, cfg.gamma_c * (1.0 - cfg.eta) / (2.0 * c.kappa));
  if (c.L > 0.0) g = std::min(g, 3.0 * cfg.gamma_c * (1.0 - cfg.eta) / c.L);
  return g;
}

double kappa_min(double eta, double gamma_min) { return 0.5 * eta * gamma_min * gamma_min; }

Count saturating_floor(long double x) {
  constexpr auto kMax = std::numeric_limits<Count>::max();
  if (std::isnan(x)) throw InvalidInput("saturating_floor: NaN");
  if (x <= 0.0L) return 0;
  if (x >= static_cast<long double>(kMax)) return kMax;
  // Quotients that are integers in exact arithmetic can land just below.
  const long double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9L * std::max(1.0L, x)) return static_cast<Count>(nearest);
  return static_cast<Count>(std::floor(x));
}

Count saturating_mul(Count a, Count b) {
  constexpr auto kMax = std::numeric_limits<Count>::max();
  if (a != 0 && b > kMax / a) return kMax;
  return a * b;
}

Count max_consecutive_unsuccessful(double gamma_c, double gamma_min, double gamma_hi) {
  if (!(gamma_c > 0.0 && gamma_c < 1.0) || !(gamma_min > 0.0 && gamma_min <= gamma_hi)) {
    throw InvalidInput("max_consecutive_unsuccessful: need 0<gamma_c<1, 0<gamma_min<=gamma_hi");
  }
  const long double r = std::log(static_cast<long double>(gamma_min) / gamma_hi) /
                        std::log(static_cast<long double>(gamma_c));
  // log ratios of exact powers land a few ulps off the integer.
  const long double nearest = std::round(r);
  if (std::abs(r - nearest) <= 1e-9L * std::max(1.0L, std::abs(r))) {
    return saturating_floor(nearest);
  }
  return saturating_floor(std::ceil(r));
}

Count unsuccessful_run_cap(const SolverConfig& cfg, const ProblemConstants& c) {
  const double gmin = gamma_min(cfg, c);
  return std::max<Count>(1, max_consecutive_unsuccessful(cfg.gamma_c, gmin, cfg.gamma_hi));
}

namespace {

Count successful_cap(double f0, const ProblemConstants& c, const SolverConfig& cfg,
                     long double inv_eps_power) {
  const double kmin = kappa_min(cfg.eta, gamma_min(cfg, c));
  const long double gap = static_cast<long double>(f0) - c.f_inf;
  if (gap <= 0.0L) return 0;
  return saturating_floor(gap / kmin * inv_eps_power);
}

}  // namespace

Count first_order_bound(double f0, const ProblemConstants& c, const SolverConfig& cfg,
                        double eps_g) {
  if (!(eps_g > 0.0)) throw InvalidInput("first_order_bound: eps_g must be positive");
  const long double inv = 1.0L / (static_cast<long double>(eps_g) * eps_g);
  return saturating_mul(unsuccessful_run_cap(cfg, c), successful_cap(f0, c, cfg, inv));
}

Count second_order_bound(double f0, const ProblemConstants& c, const SolverConfig& cfg,
                         double eps_g, double eps_H) {
  if (!(eps_g > 0.0 && eps_H > 0.0)) {
    throw InvalidInput("second_order_bound: tolerances must be positive");
  }
  const long double eg = eps_g;
  const long double eh = eps_H;
  const long double inv = std::max(1.0L / (eg * eg), 1.0L / (eh * eh * eh));
  return saturating_mul(unsuccessful_run_cap(cfg, c), successful_cap(f0, c, cfg, inv));
}

double fixed_case2_min_drop(double eps, double beta) {
  return std::pow(eps, 1.5) / (6.0 * beta * beta);
}

Count fixed_case2_bound(double f0, double f_inf, double eps, double beta) {
  const long double gap = static_cast<long double>(f0) - f_inf;
  const long double drop = std::pow(static_cast<long double>(eps), 1.5L) /
                           (6.0L * static_cast<long double>(beta) * beta);
  return saturating_floor(gap / drop);
}

}  // namespace trcx
