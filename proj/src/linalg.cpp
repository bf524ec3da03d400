#include "trcx/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "trcx/errors.hpp"

namespace trcx {

SymMatrix::SymMatrix(const Matrix& full) {
  if (full.rows() != full.cols()) {
    throw DimensionMismatch("SymMatrix: input is not square");
  }
  a_ = full.triangularView<Eigen::Lower>();
  a_.triangularView<Eigen::StrictlyUpper>() = a_.transpose();
}

SymMatrix SymMatrix::identity(Eigen::Index n) {
  return SymMatrix(Matrix(Matrix::Identity(n, n)));
}

SymMatrix SymMatrix::diagonal(const Vector& d) {
  return SymMatrix(Matrix(d.asDiagonal()));
}

void SymMatrix::set(Eigen::Index i, Eigen::Index j, double v) {
  a_(i, j) = v;
  a_(j, i) = v;
}

SymMatrix SymMatrix::shifted(double c) const {
  SymMatrix out = *this;
  out.a_.diagonal().array() += c;
  return out;
}

SymMatrix SymMatrix::scaled(double c) const {
  SymMatrix out = *this;
  out.a_ *= c;
  return out;
}

void canonical_sign(Vector& v) {
  const double tiny = 1e-14 * std::max(1.0, v.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > tiny) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

EigenDecomposition eigen_decomposition(const SymMatrix& a) {
  if (a.dim() < 1) throw InvalidInput("eigen_decomposition: empty matrix");
  if (!a.all_finite()) throw InvalidInput("eigen_decomposition: non-finite entries");

  // Householder tridiagonalisation followed by implicit QL; eigenvalues come
  // back sorted ascending.
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.dense(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("eigen_decomposition: QL iteration did not converge");
  }
  EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index j = 0; j < out.vectors.cols(); ++j) {
    Vector col = out.vectors.col(j);
    col.normalize();
    canonical_sign(col);
    out.vectors.col(j) = col;
  }
  return out;
}

EigenPair leftmost_eigenpair(const SymMatrix& a) {
  EigenDecomposition d = eigen_decomposition(a);
  return {d.values[0], d.vectors.col(0)};
}

double spectral_norm(const SymMatrix& a) {
  if (a.dim() == 0) return 0.0;
  if (!a.all_finite()) throw InvalidInput("spectral_norm: non-finite entries");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.dense(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace trcx
