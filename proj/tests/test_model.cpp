#include <doctest.h>

#include <random>

#include "support.hpp"
#include "trcx/errors.hpp"
#include "trcx/model.hpp"

using namespace trcx;

namespace {

QuadraticModel make(double f0, Vector g, SymMatrix h) { return {f0, std::move(g), std::move(h)}; }

double scalar_loop_value(const QuadraticModel& m, const Vector& s) {
  double v = m.f0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    v += m.grad[i] * s[i];
    for (Eigen::Index j = 0; j < s.size(); ++j) v += 0.5 * s[i] * m.hess(i, j) * s[j];
  }
  return v;
}

// Best decrease along t * d for t in [0, tmax] on an even grid.
double grid_decrease(const QuadraticModel& m, const Vector& d, double tmax, int points) {
  double best = 0.0;
  for (int i = 0; i <= points; ++i) {
    const double t = tmax * i / points;
    best = std::max(best, model_decrease(m, Vector(t * d)));
  }
  return best;
}

}  // namespace

TEST_CASE("evaluate") {
  const QuadraticModel m = make(1.0, Vector{{1.0, 0.0}}, SymMatrix::identity(2));
  CHECK(evaluate(m, Vector::Zero(2)) == 1.0);
  CHECK(evaluate(make(0.0, Vector{{1.0, 0.0}}, SymMatrix::identity(2)), Vector{{-1.0, 0.0}}) ==
        doctest::Approx(-0.5));
  CHECK_THROWS_AS(evaluate(m, Vector::Zero(3)), DimensionMismatch);

  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    const QuadraticModel r = make(1.5, test::random_vector(rng, 3), test::random_symmetric(rng, 3));
    const Vector s = test::random_vector(rng, 3);
    CHECK(evaluate(r, s) == doctest::Approx(scalar_loop_value(r, s)).epsilon(1e-12));
    CHECK(evaluate(r, s) == doctest::Approx(r.f0 - model_decrease(r, s)).epsilon(1e-12));
  }
}

TEST_CASE("gradient Cauchy step: fixed cases") {
  CauchyStep c = cauchy_gradient(make(0.0, Vector{{1.0, 0.0}}, SymMatrix::identity(2)), 1.0);
  CHECK(c.t == doctest::Approx(1.0));
  CHECK(c.step[0] == doctest::Approx(-1.0));
  CHECK(c.model_decrease == doctest::Approx(0.5));
  CHECK(c.branch == CauchyBranch::gradient);

  c = cauchy_gradient(make(0.0, Vector{{1.0, 0.0}}, SymMatrix::identity(2).scaled(-1.0)), 2.0);
  CHECK(c.t == doctest::Approx(2.0));
  CHECK(c.step[0] == doctest::Approx(-2.0));
  CHECK(c.model_decrease == doctest::Approx(4.0));

  CHECK_THROWS_AS(cauchy_gradient(make(0.0, Vector::Zero(2), SymMatrix::identity(2)), 1.0),
                  DegenerateDirection);
  CHECK_THROWS_AS(cauchy_gradient(make(0.0, Vector::Ones(2), SymMatrix::identity(2)), 0.0),
                  InvalidInput);
}

TEST_CASE("gradient Cauchy step matches a 1e6-point grid search") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 5; ++t) {
    const QuadraticModel m = make(0.0, test::random_vector(rng, 3), test::random_symmetric(rng, 3));
    const double delta = 0.7;
    const CauchyStep c = cauchy_gradient(m, delta);
    const double oracle = grid_decrease(m, -m.grad, delta / m.grad.norm(), 1'000'000);
    CHECK(c.model_decrease >= oracle - 1e-6);
    CHECK(c.model_decrease == doctest::Approx(oracle).epsilon(1e-6));
  }
}

TEST_CASE("eigen Cauchy step: fixed cases") {
  const SymMatrix h = SymMatrix::diagonal(Vector{{1.0, -2.0}});
  const EigenPair p = leftmost_eigenpair(h);

  CauchyStep c = cauchy_eigen(make(0.0, Vector::Zero(2), h), 1.0, p);
  CHECK(std::abs(c.step[1]) == doctest::Approx(1.0));
  CHECK(c.step[0] == doctest::Approx(0.0));
  CHECK(c.model_decrease == doctest::Approx(1.0));

  const QuadraticModel m = make(0.0, Vector{{0.0, -1.0}}, h);
  c = cauchy_eigen(m, 1.0, p);
  CHECK(c.step[1] == doctest::Approx(1.0));
  CHECK(c.model_decrease == doctest::Approx(2.0));
  CHECK(c.model_decrease >= grid_decrease(m, Vector{{0.0, 1.0}}, 1.0, 100000) - 1e-12);

  // Same model with the eigenvector handed over pointing the wrong way.
  EigenPair flipped = p;
  flipped.vector = -p.vector;
  CHECK(cauchy_eigen(m, 1.0, flipped).step[1] == doctest::Approx(1.0));

  c = cauchy_eigen(m, 0.0, p);
  CHECK(c.step.norm() == 0.0);
  CHECK(c.model_decrease == 0.0);

  CHECK_THROWS_AS(cauchy_eigen(m, 1.0, EigenPair{0.5, Vector{{1.0, 0.0}}}), InvalidBranch);
}

TEST_CASE("Cauchy decrease lower bounds on 1000 random models") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> dim(1, 10);
  std::uniform_real_distribution<double> logu(-3.0, 1.0);
  int eigen_cases = 0;
  for (int t = 0; t < 1000; ++t) {
    const Eigen::Index n = dim(rng);
    const QuadraticModel m =
        make(0.0, test::random_vector(rng, n), test::random_symmetric(rng, n, 2.0));
    const double kappa = spectral_norm(m.hess);
    const double gamma = std::pow(10.0, logu(rng));
    const double gn = m.grad.norm();

    const CauchyStep cg = cauchy_gradient(m, gamma * gn);
    CHECK(cg.step.norm() <= gamma * gn + 1e-12);
    CHECK(evaluate(m, cg.step) <= m.f0);
    CHECK(cg.model_decrease >= 0.5 * std::min(1.0 / (1.0 + kappa), gamma) * gn * gn - 1e-10);

    const EigenPair p = leftmost_eigenpair(m.hess);
    if (p.value < 0.0) {
      ++eigen_cases;
      const double lam = -p.value;
      const CauchyStep ce = cauchy_eigen(m, gamma * lam, p);
      CHECK(ce.step.norm() <= gamma * lam + 1e-12);
      CHECK(m.grad.dot(ce.step) <= 0.0);
      CHECK(ce.model_decrease >= 0.5 * gamma * gamma * lam * lam * lam - 1e-10);
    }
  }
  CHECK(eigen_cases > 500);
}
