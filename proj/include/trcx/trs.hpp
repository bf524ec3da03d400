#pragma once

#include "trcx/linalg.hpp"

namespace trcx {

struct KktResiduals {
  double stationarity = 0.0;      // ||g + (H + xi I) s||
  double shift_margin = 0.0;      // lambda_min(H) + xi, should be >= 0
  double complementarity = 0.0;   // |xi * (delta - ||s||)|
};

struct TrsSolution {
  Vector step;
  double multiplier = 0.0;
  KktResiduals kkt;
  bool boundary = false;
  bool hard_case = false;
};

struct TrsOptions {
  double tol = 1e-10;
  int max_iters = 200;
};

/// Global minimiser of g^T s + 1/2 s^T H s subject to ||s|| <= delta together
/// with its multiplier. Works in the eigenbasis of H:
///   interior:  xi = 0 and H s = -g (minimal-norm solution if H is singular);
///   boundary:  ||(H + xi I)^{-1} g|| = delta solved for xi > max(0, -lambda_1)
///              by safeguarded Newton on 1/delta - 1/||s(xi)||;
///   hard case: g has no component in the leftmost eigenspace and the
///              shifted solve at xi = -lambda_1 stays inside the ball, so the
///              leftmost eigenvector is added to reach the boundary.
/// Throws InvalidInput for delta <= 0 and NumericalFailure if the root finder
/// exhausts its iteration cap.
TrsSolution solve_exact(const Vector& g, const SymMatrix& h, double delta,
                        const TrsOptions& opts = {});

KktResiduals kkt_residuals(const Vector& g, const SymMatrix& h, double delta, const Vector& s,
                           double xi);

}  // namespace trcx
