#include "trcx/model.hpp"

#include <algorithm>
#include <cmath>

#include "trcx/errors.hpp"

namespace trcx {

namespace {

void check_dims(const QuadraticModel& m, const Vector& s) {
  if (m.hess.dim() != m.grad.size() || s.size() != m.grad.size()) {
    throw DimensionMismatch("quadratic model: dimension mismatch");
  }
}

}  // namespace

double evaluate(const QuadraticModel& m, const Vector& s) {
  check_dims(m, s);
  return m.f0 + m.grad.dot(s) + 0.5 * m.hess.quad_form(s);
}

double model_decrease(const QuadraticModel& m, const Vector& s) {
  check_dims(m, s);
  return -(m.grad.dot(s) + 0.5 * m.hess.quad_form(s));
}

CauchyStep cauchy_gradient(const QuadraticModel& m, double delta) {
  if (m.hess.dim() != m.grad.size()) {
    throw DimensionMismatch("cauchy_gradient: dimension mismatch");
  }
  if (!(delta > 0.0)) throw InvalidInput("cauchy_gradient: radius must be positive");
  const double gnorm = m.grad.norm();
  if (gnorm == 0.0) {
    throw DegenerateDirection("cauchy_gradient: zero gradient has no descent direction");
  }

  const double t_max = delta / gnorm;
  const double curv = m.hess.quad_form(m.grad);  // g^T H g
  const double gg = gnorm * gnorm;
  double t = t_max;
  if (curv > 0.0) t = std::min(gg / curv, t_max);

  CauchyStep out;
  out.t = t;
  out.branch = CauchyBranch::gradient;
  out.step = -t * m.grad;
  out.model_decrease = t * gg - 0.5 * t * t * curv;
  return out;
}

CauchyStep cauchy_eigen(const QuadraticModel& m, double delta, const EigenPair& pair) {
  if (m.hess.dim() != m.grad.size() || pair.vector.size() != m.grad.size()) {
    throw DimensionMismatch("cauchy_eigen: dimension mismatch");
  }
  if (!(pair.value < 0.0)) {
    throw InvalidBranch("cauchy_eigen: leftmost eigenvalue is not negative");
  }
  if (delta < 0.0) throw InvalidInput("cauchy_eigen: negative radius");

  Vector u = pair.vector;
  double gu = m.grad.dot(u);
  if (gu > 0.0) {
    u = -u;
    gu = -gu;
  }

  CauchyStep out;
  out.t = delta;
  out.branch = CauchyBranch::eigen;
  out.step = delta * u;
  out.model_decrease = -delta * gu - 0.5 * delta * delta * pair.value;
  return out;
}

}  // namespace trcx
