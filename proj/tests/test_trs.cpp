#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "trcx/errors.hpp"
#include "trcx/model.hpp"
#include "trcx/trs.hpp"

using namespace trcx;

namespace {

double q(const Vector& g, const SymMatrix& h, const Vector& s) { return g.dot(s) + 0.5 * h.quad_form(s); }

// Minimum of the model over the 2-d disc: a polar grid plus the boundary circle.
double disc_grid_min(const Vector& g, const SymMatrix& h, double delta, int rings, int angles) {
  double best = 0.0;
  for (int r = 1; r <= rings; ++r) {
    const double rad = delta * r / rings;
    for (int a = 0; a < angles; ++a) {
      const double th = 2.0 * M_PI * a / angles;
      best = std::min(best, q(g, h, Vector{{rad * std::cos(th), rad * std::sin(th)}}));
    }
  }
  return best;
}

void check_kkt(const Vector& g, const SymMatrix& h, double delta, const TrsSolution& s, double tol) {
  CHECK(s.multiplier >= 0.0);
  CHECK(s.step.norm() <= delta * (1.0 + 1e-10));
  CHECK(s.kkt.stationarity <= tol * std::max(1.0, g.norm()));
  CHECK(s.kkt.shift_margin >= -tol);
  CHECK(s.kkt.complementarity <= tol);
  const KktResiduals r = kkt_residuals(g, h, delta, s.step, s.multiplier);
  CHECK(r.stationarity <= tol * std::max(1.0, g.norm()));
}

}  // namespace

TEST_CASE("interior and zero-gradient cases") {
  TrsSolution s = solve_exact(Vector{{1.0, 0.0}}, SymMatrix::identity(2), 2.0);
  CHECK(s.step[0] == doctest::Approx(-1.0));
  CHECK(s.step[1] == doctest::Approx(0.0));
  CHECK(s.multiplier == 0.0);
  CHECK_FALSE(s.boundary);

  s = solve_exact(Vector::Zero(2), SymMatrix::diagonal(Vector{{1.0, 2.0}}), 1.0);
  CHECK(s.step.norm() == 0.0);
  CHECK(s.multiplier == 0.0);

  CHECK_THROWS_AS(solve_exact(Vector::Ones(2), SymMatrix::identity(2), 0.0), InvalidInput);
}

TEST_CASE("hard case from the worked example") {
  const Vector g{{1.0, 0.0}};
  const SymMatrix h = SymMatrix::diagonal(Vector{{1.0, -1.0}});
  const TrsSolution s = solve_exact(g, h, 1.0);
  CHECK(s.hard_case);
  CHECK(s.multiplier == doctest::Approx(1.0));
  CHECK(s.step[0] == doctest::Approx(-0.5));
  CHECK(std::abs(s.step[1]) == doctest::Approx(std::sqrt(3.0) / 2.0));
  CHECK(s.step.norm() == doctest::Approx(1.0));
  check_kkt(g, h, 1.0, s, 1e-9);

  // Boundary circle with 1e5 points and an interior polar grid.
  double best = 0.0;
  for (int a = 0; a < 100000; ++a) {
    const double th = 2.0 * M_PI * a / 100000;
    best = std::min(best, q(g, h, Vector{{std::cos(th), std::sin(th)}}));
  }
  best = std::min(best, disc_grid_min(g, h, 1.0, 200, 720));
  CHECK(q(g, h, s.step) <= best + 1e-12);
}

TEST_CASE("singular PSD uses the minimal-norm interior solution") {
  const Vector g{{1.0, 0.0}};
  const SymMatrix h = SymMatrix::diagonal(Vector{{2.0, 0.0}});
  const TrsSolution s = solve_exact(g, h, 5.0);
  CHECK(s.step[0] == doctest::Approx(-0.5));
  CHECK(s.step[1] == doctest::Approx(0.0));
  CHECK(s.multiplier == 0.0);
}

TEST_CASE("random 2-d instances against a grid oracle") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ud(0.1, 3.0);
  for (int t = 0; t < 100; ++t) {
    const Vector g = test::random_vector(rng, 2);
    const SymMatrix h = test::random_symmetric(rng, 2, 2.0);
    const double delta = ud(rng);
    const TrsSolution s = solve_exact(g, h, delta);
    check_kkt(g, h, delta, s, 1e-9);
    CHECK(q(g, h, s.step) <= disc_grid_min(g, h, delta, 100, 720) + 1e-6);
  }
}

TEST_CASE("boundary solutions satisfy the multiplier decrease inequality") {
  std::mt19937_64 rng(22);
  int boundary = 0;
  for (int t = 0; t < 300; ++t) {
    const Eigen::Index n = 2 + t % 7;
    const Vector g = test::random_vector(rng, n);
    const SymMatrix h = test::random_symmetric(rng, n, 2.0);
    const double delta = 0.5;
    const TrsSolution s = solve_exact(g, h, delta);
    check_kkt(g, h, delta, s, 1e-9);
    if (std::abs(s.step.norm() - delta) <= 1e-12 * delta) {
      ++boundary;
      CHECK(q(g, h, s.step) <= -0.5 * s.multiplier * delta * delta + 1e-8);
    }
  }
  CHECK(boundary > 100);
}

TEST_CASE("scaling equivariance") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index n = 2 + t % 5;
    const Vector g = test::random_vector(rng, n);
    const SymMatrix h = test::random_symmetric(rng, n);
    const double c = std::uniform_real_distribution<double>(0.1, 10.0)(rng);
    const TrsSolution a = solve_exact(g, h, 0.8);
    const TrsSolution b = solve_exact(Vector(c * g), h.scaled(c), 0.8);
    CHECK((a.step - b.step).norm() <= 1e-8);
    CHECK(std::abs(c * a.multiplier - b.multiplier) <= 1e-8 * std::max(1.0, b.multiplier));
  }
}

TEST_CASE("hard case in higher dimension with a repeated leftmost eigenvalue") {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 50; ++t) {
    const Eigen::Index n = 5;
    // Random orthogonal basis, leftmost eigenvalue -1 with multiplicity 2.
    const Matrix qm = test::random_orthogonal(rng, n);
    const Vector lam{{-1.0, -1.0, 0.5, 1.5, 3.0}};
    const SymMatrix h(Matrix(qm * lam.asDiagonal() * qm.transpose()));
    Vector coeffs = test::random_vector(rng, n) * 0.1;
    coeffs[0] = coeffs[1] = 0.0;
    const Vector g = qm * coeffs;
    const TrsSolution s = solve_exact(g, h, 2.0);
    CHECK(s.hard_case);
    CHECK(s.multiplier == doctest::Approx(1.0));
    CHECK(s.step.norm() == doctest::Approx(2.0));
    check_kkt(g, h, 2.0, s, 1e-9);
  }
}
