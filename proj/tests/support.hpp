#pragma once

#include <cmath>
#include <random>

#include <Eigen/QR>

#include "trcx/linalg.hpp"

namespace trcx::test {

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

inline Vector random_unit(std::mt19937_64& rng, Eigen::Index n) {
  Vector v = random_vector(rng, n);
  return v / v.norm();
}

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> d(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = d(rng);
  return m;
}

// Orthogonal factor of a Gaussian matrix.
inline Matrix random_orthogonal(std::mt19937_64& rng, Eigen::Index n) {
  const Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, n, n));
  return qr.householderQ();
}

inline SymMatrix random_symmetric(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  Matrix m(n, n);
  std::normal_distribution<double> d(0.0, scale);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = d(rng);
  return SymMatrix(Matrix(0.5 * (m + m.transpose())));
}

// Number of eigenvalues below x: negative pivots of an unpivoted LDL^T of
// A - xI (Sylvester's law of inertia).
inline int count_below(const SymMatrix& a, double x) {
  const Eigen::Index n = a.dim();
  Matrix m = a.dense();
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) -= x;
  int neg = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    double d = m(k, k);
    if (d == 0.0) d = 1e-300;
    if (d < 0) ++neg;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double f = m(i, k) / d;
      for (Eigen::Index j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return neg;
}

// Smallest eigenvalue by bisection on the inertia count.
// det(A - xI) by Gaussian elimination with partial pivoting.
inline double char_poly(const SymMatrix& a, double x) {
  const Eigen::Index n = a.dim();
  Matrix m = a.dense();
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) -= x;
  double det = 1.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index p = k;
    for (Eigen::Index i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(p, k))) p = i;
    if (m(p, k) == 0.0) return 0.0;
    if (p != k) {
      m.row(p).swap(m.row(k));
      det = -det;
    }
    det *= m(k, k);
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double f = m(i, k) / m(k, k);
      for (Eigen::Index j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return det;
}

// Smallest root of det(A - xI): scan up from a Gershgorin lower bound for the
// first sign change, then bisect.
inline double char_poly_smallest_root(const SymMatrix& a, int scan = 20000) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < a.dim(); ++j) s += std::abs(a(i, j));
    r = std::max(r, s);
  }
  double lo = -r - 1.0;
  const double step = (2.0 * r + 2.0) / scan;
  double plo = char_poly(a, lo);
  for (int i = 1; i <= scan; ++i) {
    const double x = lo + step;
    const double px = char_poly(a, x);
    if (px == 0.0) return x;
    if ((px < 0) != (plo < 0)) {
      double hi = x;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double pm = char_poly(a, mid);
        if ((pm < 0) == (plo < 0)) lo = mid; else hi = mid;
      }
      return 0.5 * (lo + hi);
    }
    lo = x;
    plo = px;
  }
  return std::nan("");
}

inline double bisect_smallest(const SymMatrix& a) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < a.dim(); ++j) s += std::abs(a(i, j));
    r = std::max(r, s);
  }
  double lo = -r - 1.0, hi = r + 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(a, mid) >= 1) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace trcx::test
