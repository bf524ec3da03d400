#include "trcx/trs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "trcx/errors.hpp"

namespace trcx {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Everything expressed in the eigenbasis H = Q diag(lambda) Q^T, a = Q^T g.
struct Spectral {
  Vector lambda;
  Matrix q;
  Vector a;

  // s(xi) = -(H + xi I)^{-1} g in eigen coordinates.
  Vector coords(double xi) const {
    return (-a.array() / (lambda.array() + xi)).matrix();
  }
  // d||s||/dxi given coordinates c of s(xi).
  double dnorm(const Vector& c, double xi) const {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < c.size(); ++i) acc += c[i] * c[i] / (lambda[i] + xi);
    return -acc / c.norm();
  }
};

TrsSolution finish(const Vector& g, const SymMatrix& h, double delta, const Spectral& sp,
                   const Vector& coords, double xi, bool boundary, bool hard) {
  TrsSolution out;
  out.step = sp.q * coords;
  out.multiplier = xi;
  out.boundary = boundary;
  out.hard_case = hard;
  out.kkt.stationarity = (g + h * out.step + xi * out.step).norm();
  out.kkt.shift_margin = sp.lambda[0] + xi;
  out.kkt.complementarity = std::abs(xi * (delta - out.step.norm()));
  return out;
}

}  // namespace

KktResiduals kkt_residuals(const Vector& g, const SymMatrix& h, double delta, const Vector& s,
                           double xi) {
  KktResiduals r;
  r.stationarity = (g + h * s + xi * s).norm();
  r.shift_margin = leftmost_eigenpair(h).value + xi;
  r.complementarity = std::abs(xi * (delta - s.norm()));
  return r;
}

TrsSolution solve_exact(const Vector& g, const SymMatrix& h, double delta,
                        const TrsOptions& opts) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw InvalidInput("solve_exact: radius must be positive and finite");
  }
  if (!(opts.tol > 0.0)) throw InvalidInput("solve_exact: tolerance must be positive");
  if (g.size() != h.dim()) throw DimensionMismatch("solve_exact: dimension mismatch");
  if (!g.allFinite()) throw InvalidInput("solve_exact: non-finite gradient");

  const EigenDecomposition eig = eigen_decomposition(h);
  const Spectral sp{eig.values, eig.vectors, eig.vectors.transpose() * g};
  const Eigen::Index n = g.size();
  const double lam1 = sp.lambda[0];
  const double hscale = std::max(1.0, sp.lambda.cwiseAbs().maxCoeff());
  const double gnorm = g.norm();
  const double zero_tol = 1e-12 * hscale;

  // Interior, H positive definite.
  if (lam1 > zero_tol) {
    const Vector c = sp.coords(0.0);
    if (c.norm() <= delta) return finish(g, h, delta, sp, c, 0.0, false, false);
  }

  // Leftmost eigenspace and the part of g lying in it.
  Eigen::Index m = 1;
  while (m < n && sp.lambda[m] - lam1 <= zero_tol) ++m;
  const double a_left = sp.a.head(m).norm();
  const double hard_tol = 0.1 * opts.tol * std::max(1.0, gnorm);

  // Candidate solution with the shift sitting on the pole. Used for singular
  // PSD interiors, the exact hard case, and as the fallback when the secular
  // root is numerically indistinguishable from the pole.
  auto pole_solution = [&]() -> std::optional<TrsSolution> {
    const double xi = std::max(0.0, -lam1);
    Vector c = Vector::Zero(n);
    for (Eigen::Index i = m; i < n; ++i) c[i] = -sp.a[i] / (sp.lambda[i] + xi);
    const double cn = c.norm();
    if (cn > delta) return std::nullopt;
    if (xi == 0.0) return finish(g, h, delta, sp, c, 0.0, false, false);
    c[0] += std::sqrt(std::max(0.0, delta * delta - cn * cn));
    return finish(g, h, delta, sp, c, xi, true, true);
  };

  if (lam1 <= zero_tol && a_left <= hard_tol) {
    if (auto s = pole_solution()) return *s;
  }

  // Boundary: find xi in (lo, hi] with ||s(xi)|| = delta.
  const double lo = std::max(0.0, -lam1);
  double a = lo;
  double b = lo + gnorm / delta;
  double xi = b;
  Vector best_c = sp.coords(xi);
  double best_err = std::abs(best_c.norm() - delta);
  double best_xi = xi;
  bool converged = false;

  for (int it = 0; it < opts.max_iters; ++it) {
    const Vector c = sp.coords(xi);
    const double nrm = c.norm();
    const double err = std::abs(nrm - delta);
    if (err < best_err) {
      best_err = err;
      best_c = c;
      best_xi = xi;
    }
    if (err <= 4.0 * kEps * delta) {
      converged = true;
      break;
    }
    if (nrm > delta) {
      a = xi;
    } else {
      b = xi;
    }
    if (b - a <= 4.0 * kEps * std::max(1.0, std::abs(b))) break;

    // Newton on 1/delta - 1/||s||.
    const double phi = 1.0 / delta - 1.0 / nrm;
    const double dphi = sp.dnorm(c, xi) / (nrm * nrm);
    double next = xi - phi / dphi;
    if (!std::isfinite(next) || next <= a || next >= b) next = 0.5 * (a + b);
    xi = next;
  }

  if (converged || best_err <= opts.tol * delta) {
    TrsSolution sol = finish(g, h, delta, sp, best_c, best_xi, true, false);
    if (sol.kkt.stationarity <= opts.tol * std::max(1.0, gnorm) &&
        sol.kkt.complementarity <= opts.tol) {
      return sol;
    }
  }

  // Root pinned against the pole: g is (numerically) orthogonal to the
  // leftmost eigenspace.
  if (lam1 <= zero_tol && a_left <= opts.tol * std::max(1.0, gnorm)) {
    if (auto s = pole_solution()) return *s;
  }

  std::ostringstream msg;
  msg << "solve_exact: secular equation did not converge (|  ||s|| - delta | = " << best_err
      << ", xi = " << best_xi << ")";
  throw NumericalFailure(msg.str());
}

}  // namespace trcx
