#pragma once

#include <Eigen/Core>

namespace trcx {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dense symmetric matrix. Only the lower triangle of the input is read; the
/// upper triangle is mirrored from it so symmetry is exact.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(Eigen::Index n) : a_(Matrix::Zero(n, n)) {}
  explicit SymMatrix(const Matrix& full);

  static SymMatrix identity(Eigen::Index n);
  static SymMatrix diagonal(const Vector& d);

  Eigen::Index dim() const { return a_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return a_(i, j); }
  // Writes both (i,j) and (j,i).
  void set(Eigen::Index i, Eigen::Index j, double v);

  const Matrix& dense() const { return a_; }
  Vector operator*(const Vector& v) const { return a_ * v; }
  double quad_form(const Vector& v) const { return v.dot(a_ * v); }

  SymMatrix shifted(double c) const;
  SymMatrix scaled(double c) const;
  bool all_finite() const { return a_.allFinite(); }

 private:
  Matrix a_;
};

struct EigenPair {
  double value = 0.0;
  Vector vector;
};

/// Full spectrum in ascending order; column i of `vectors` pairs with
/// `values[i]` and carries the first-nonzero-positive sign convention.
struct EigenDecomposition {
  Vector values;
  Matrix vectors;
};

EigenDecomposition eigen_decomposition(const SymMatrix& a);

/// Algebraically smallest eigenvalue with a unit eigenvector whose first
/// nonzero component is positive. Throws InvalidInput on non-finite entries.
EigenPair leftmost_eigenpair(const SymMatrix& a);

inline double negative_part(double lambda) { return lambda < 0.0 ? lambda : 0.0; }

/// max |eigenvalue|.
double spectral_norm(const SymMatrix& a);

// Flips v in place so its first entry with |v_i| > tiny is positive.
void canonical_sign(Vector& v);

}  // namespace trcx
