#pragma once

#include "trcx/linalg.hpp"

namespace trcx {

/// m(s) = f0 + g^T s + 1/2 s^T H s
struct QuadraticModel {
  double f0 = 0.0;
  Vector grad;
  SymMatrix hess;

  Eigen::Index dim() const { return grad.size(); }
};

enum class CauchyBranch { gradient, eigen };

struct CauchyStep {
  Vector step;
  double t = 0.0;
  CauchyBranch branch = CauchyBranch::gradient;
  double model_decrease = 0.0;  // m(0) - m(step)
};

double evaluate(const QuadraticModel& m, const Vector& s);

/// m(0) - m(s), computed without forming f0 so small decreases keep their
/// relative accuracy.
double model_decrease(const QuadraticModel& m, const Vector& s);

/// Minimiser of m along -g with t*||g|| <= delta.
/// Throws DegenerateDirection if g == 0, InvalidInput if delta <= 0.
CauchyStep cauchy_gradient(const QuadraticModel& m, double delta);

/// Step of length delta along the leftmost eigenvector, re-signed so that
/// g^T u <= 0. When g^T u == 0 the eigenvector keeps the sign it came with.
/// Throws InvalidBranch if pair.value >= 0.
CauchyStep cauchy_eigen(const QuadraticModel& m, double delta, const EigenPair& pair);

}  // namespace trcx
