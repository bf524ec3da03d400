#pragma once

#include <cstdint>

#include "trcx/config.hpp"
#include "trcx/linalg.hpp"

namespace trcx {

/// Axis-aligned box [lo, hi].
struct Box {
  Vector lo;
  Vector hi;

  static Box cube(Eigen::Index n, double half_width);
  bool contains(const Vector& x, double slack = 0.0) const;
};

/// Constants of the objective, valid on `region`: L is the Lipschitz
/// constant of the Hessian, kappa bounds ||H||, f_inf bounds f from below.
struct ProblemConstants {
  double L = 0.0;
  double kappa = 0.0;
  double f_inf = 0.0;
  Box region;
};

using Count = std::uint64_t;

/// min{gamma_lo, gamma_c/(1+kappa), gamma_c(1-eta)/(2 kappa), 3 gamma_c(1-eta)/L}.
/// Terms with kappa == 0 or L == 0 in the denominator are dropped.
double gamma_min(const SolverConfig& cfg, const ProblemConstants& c);

double kappa_min(double eta, double gamma_min);

/// ceil(log_{gamma_c}(gamma_min / gamma_hi)); may be 0 when gamma_min == gamma_hi.
Count max_consecutive_unsuccessful(double gamma_c, double gamma_min, double gamma_hi);

/// The unsuccessful-run cap as used by the complexity bounds: never below 1.
Count unsuccessful_run_cap(const SolverConfig& cfg, const ProblemConstants& c);

/// Cap on #{k : ||g_k|| > eps_g} for Update 1. Saturates at UINT64_MAX.
Count first_order_bound(double f0, const ProblemConstants& c, const SolverConfig& cfg,
                        double eps_g);

/// Cap on #{k : ||g_k|| > eps_g or |lambda_k-| > eps_H} for Update 2.
Count second_order_bound(double f0, const ProblemConstants& c, const SolverConfig& cfg,
                         double eps_g, double eps_H);

// Fixed-radius method.
double fixed_case2_min_drop(double eps, double beta);  // eps^{3/2} / (6 beta^2)
Count fixed_case2_bound(double f0, double f_inf, double eps, double beta);

// floor(x) as a count, saturating for huge or infinite x; 0 for x <= 0.
Count saturating_floor(long double x);
Count saturating_mul(Count a, Count b);

}  // namespace trcx
