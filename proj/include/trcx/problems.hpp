#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "trcx/bounds.hpp"
#include "trcx/linalg.hpp"

namespace trcx {

/// An objective with analytic first and second derivatives and the constants
/// (L, kappa, f_inf) certified on `constants.region`. Evaluation functions
/// must be pure so one oracle can be shared between concurrent solves.
struct ObjectiveOracle {
  std::string name;
  Eigen::Index dim = 0;
  std::function<double(const Vector&)> eval_f;
  std::function<Vector(const Vector&)> eval_g;
  std::function<SymMatrix(const Vector&)> eval_H;
  ProblemConstants constants;
  Vector suggested_x0;
};

/// Built-in problems: "quadratic" (any dim), "rosenbrock" (chained, dim >= 2),
/// "saddle" and "camel6" (dim 2). Throws InvalidInput for unknown names or
/// unsupported dimensions.
ObjectiveOracle builtin(const std::string& name, Eigen::Index dim);

std::vector<std::string> builtin_names();

/// f(x) = 1/2 x^T A x - b^T x + constant with A positive semidefinite and b
/// in the range of A. f_inf is the exact minimum.
ObjectiveOracle quadratic_problem(const SymMatrix& a, const Vector& b, double region_half_width = 1e6,
                                  double constant = 0.0);

/// One monomial c * prod_j x_j^{p_j}.
struct PolynomialTerm {
  double coef = 0.0;
  std::vector<int> powers;
};

/// Polynomial objective with user-declared constants.
ObjectiveOracle polynomial_problem(std::string name, Eigen::Index dim,
                                   std::vector<PolynomialTerm> terms, ProblemConstants constants,
                                   Vector x0);

/// Loads a polynomial problem from a JSON file (schema "trcx.problem/1"):
///   {"schema": "trcx.problem/1", "name": "...", "dim": n,
///    "terms": [{"coef": c, "powers": [p_1, ..., p_n]}, ...],
///    "constants": {"L": ..., "kappa": ..., "f_inf": ...,
///                  "region": {"lo": [...], "hi": [...]}},
///    "x0": [...]}
ObjectiveOracle load_problem_file(const std::filesystem::path& path);

struct DerivativeReport {
  double grad_rel_error = 0.0;
  double hess_rel_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Central differences of f (for g) and of g (for H, column by column),
/// relative errors measured as ||fd - analytic|| / max(1, ||analytic||).
/// The pass threshold is max(10 h^2, 1e-6).
DerivativeReport check_derivatives(const ObjectiveOracle& o, const Vector& x, double h);

}  // namespace trcx
