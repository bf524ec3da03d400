#include "trcx/problems.hpp"

#include <cmath>
#include <fstream>
#include <memory>

#include <json.hpp>

#include "trcx/errors.hpp"

namespace trcx {

namespace {

// Chained Rosenbrock sum_{i} 100 (x_{i+1} - x_i^2)^2 + (1 - x_i)^2.
ObjectiveOracle rosenbrock(Eigen::Index n) {
  if (n < 2) throw InvalidInput("rosenbrock: dimension must be >= 2");
  ObjectiveOracle o;
  o.name = "rosenbrock";
  o.dim = n;
  o.eval_f = [n](const Vector& x) {
    double f = 0.0;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      const double a = x[i + 1] - x[i] * x[i];
      const double b = 1.0 - x[i];
      f += 100.0 * a * a + b * b;
    }
    return f;
  };
  o.eval_g = [n](const Vector& x) {
    Vector g = Vector::Zero(n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      const double a = x[i + 1] - x[i] * x[i];
      g[i] += -400.0 * x[i] * a - 2.0 * (1.0 - x[i]);
      g[i + 1] += 200.0 * a;
    }
    return g;
  };
  o.eval_H = [n](const Vector& x) {
    Matrix m = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      m(i, i) += 1200.0 * x[i] * x[i] - 400.0 * x[i + 1] + 2.0;
      m(i + 1, i + 1) += 200.0;
      m(i, i + 1) += -400.0 * x[i];
      m(i + 1, i) += -400.0 * x[i];
    }
    return SymMatrix(m);
  };
  // Gershgorin bounds on ||x||_inf <= 5. For dH, row i is bounded by
  // 12400|dx_i| + 400|dx_{i-1}| + 400|dx_{i+1}| <= 12412.9 ||dx||.
  o.constants.L = 12413.0;
  o.constants.kappa = n == 2 ? 34002.0 : 36202.0;
  o.constants.f_inf = 0.0;
  o.constants.region = Box::cube(n, 5.0);
  o.suggested_x0 = Vector(n);
  for (Eigen::Index i = 0; i < n; ++i) o.suggested_x0[i] = (i % 2 == 0) ? -1.2 : 1.0;
  return o;
}

// x1^2 - x2^2 + x2^4: strict saddle at the origin, minima at (0, +-1/sqrt 2).
ObjectiveOracle saddle() {
  ObjectiveOracle o;
  o.name = "saddle";
  o.dim = 2;
  o.eval_f = [](const Vector& x) {
    const double y2 = x[1] * x[1];
    return x[0] * x[0] - y2 + y2 * y2;
  };
  o.eval_g = [](const Vector& x) {
    return Vector{{2.0 * x[0], -2.0 * x[1] + 4.0 * x[1] * x[1] * x[1]}};
  };
  o.eval_H = [](const Vector& x) {
    return SymMatrix::diagonal(Vector{{2.0, -2.0 + 12.0 * x[1] * x[1]}});
  };
  // On ||x||_inf <= 2: |H_22| <= 46 and |d H_22 / d x2| = 24|x2| <= 48.
  o.constants.L = 48.0;
  o.constants.kappa = 46.0;
  o.constants.f_inf = -0.25;
  o.constants.region = Box::cube(2, 2.0);
  o.suggested_x0 = Vector::Zero(2);
  return o;
}

// Six-hump camel back.
ObjectiveOracle camel6() {
  ObjectiveOracle o;
  o.name = "camel6";
  o.dim = 2;
  o.eval_f = [](const Vector& v) {
    const double x = v[0], y = v[1], x2 = x * x, y2 = y * y;
    return (4.0 - 2.1 * x2 + x2 * x2 / 3.0) * x2 + x * y + (-4.0 + 4.0 * y2) * y2;
  };
  o.eval_g = [](const Vector& v) {
    const double x = v[0], y = v[1];
    return Vector{{8.0 * x - 8.4 * x * x * x + 2.0 * std::pow(x, 5) + y,
                   x - 8.0 * y + 16.0 * y * y * y}};
  };
  o.eval_H = [](const Vector& v) {
    const double x = v[0], y = v[1], x2 = x * x;
    Matrix m(2, 2);
    m << 8.0 - 25.2 * x2 + 10.0 * x2 * x2, 1.0, 1.0, -8.0 + 48.0 * y * y;
    return SymMatrix(m);
  };
  // Box [-3,3] x [-2,2]: |f_xx| + 1 <= 592.2, |f_yy| + 1 <= 185,
  // |f_xxx| = |40x^3 - 50.4x| <= 928.8, |f_yyy| = |96y| <= 192.
  o.constants.L = 929.0;
  o.constants.kappa = 593.0;
  o.constants.f_inf = -1.0316284535;
  o.constants.region = {Vector{{-3.0, -2.0}}, Vector{{3.0, 2.0}}};
  o.suggested_x0 = Vector{{-1.0, 1.0}};
  return o;
}

ObjectiveOracle builtin_quadratic(Eigen::Index n) {
  if (n < 1) throw InvalidInput("quadratic: dimension must be >= 1");
  Matrix a = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) = 1.0 + static_cast<double>(i);
    if (i + 1 < n) a(i, i + 1) = a(i + 1, i) = 0.5;
  }
  const SymMatrix am(a);
  const Vector b = Vector::Ones(n);
  // Shift by a constant so that f_inf = 0.
  const double shift = -quadratic_problem(am, b).constants.f_inf;
  ObjectiveOracle o = quadratic_problem(am, b, 1e6, shift);
  o.suggested_x0 = Vector::Constant(n, 2.0);
  return o;
}

double int_pow(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

}  // namespace

std::vector<std::string> builtin_names() { return {"quadratic", "rosenbrock", "saddle", "camel6"}; }

ObjectiveOracle builtin(const std::string& name, Eigen::Index dim) {
  if (name == "quadratic") return builtin_quadratic(dim);
  if (name == "rosenbrock") return rosenbrock(dim);
  if (name == "saddle" || name == "camel6") {
    if (dim != 2) throw InvalidInput(name + ": only dimension 2 is supported");
    return name == "saddle" ? saddle() : camel6();
  }
  throw InvalidInput("unknown problem '" + name + "'");
}

ObjectiveOracle quadratic_problem(const SymMatrix& a, const Vector& b, double region_half_width,
                                  double constant) {
  if (a.dim() != b.size()) throw DimensionMismatch("quadratic_problem: dimension mismatch");
  const Eigen::Index n = b.size();
  const EigenDecomposition eig = eigen_decomposition(a);
  if (eig.values[0] < -1e-12 * std::max(1.0, eig.values.cwiseAbs().maxCoeff())) {
    throw InvalidInput("quadratic_problem: matrix is not positive semidefinite");
  }
  // f_inf = c - 1/2 b^T A^+ b and x* = A^+ b, via the spectral pseudo-inverse.
  const Vector c = eig.vectors.transpose() * b;
  const double zero = 1e-12 * std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  double f_inf = 0.0;
  Vector y = Vector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (eig.values[i] > zero) {
      f_inf -= 0.5 * c[i] * c[i] / eig.values[i];
      y[i] = c[i] / eig.values[i];
    } else if (std::abs(c[i]) > 1e-12 * std::max(1.0, b.norm())) {
      throw InvalidInput("quadratic_problem: unbounded below (b not in range of A)");
    }
  }

  f_inf += constant;

  auto am = std::make_shared<const SymMatrix>(a);
  auto bv = std::make_shared<const Vector>(b);
  auto xs = std::make_shared<const Vector>(eig.vectors * y);
  ObjectiveOracle o;
  o.name = "quadratic";
  o.dim = n;
  // Expanded around the minimizer so f - f_inf keeps its relative accuracy near x*.
  o.eval_f = [am, xs, f_inf](const Vector& x) {
    return 0.5 * am->quad_form(Vector(x - *xs)) + f_inf;
  };
  o.eval_g = [am, bv](const Vector& x) { return Vector(*am * x - *bv); };
  o.eval_H = [am](const Vector&) { return *am; };
  o.constants.L = 0.0;
  o.constants.kappa = eig.values.cwiseAbs().maxCoeff();
  o.constants.f_inf = f_inf;
  o.constants.region = Box::cube(n, region_half_width);
  o.suggested_x0 = Vector::Ones(n);
  return o;
}

ObjectiveOracle polynomial_problem(std::string name, Eigen::Index dim,
                                   std::vector<PolynomialTerm> terms, ProblemConstants constants,
                                   Vector x0) {
  if (dim < 1) throw InvalidInput("polynomial_problem: dimension must be >= 1");
  for (const auto& t : terms) {
    if (static_cast<Eigen::Index>(t.powers.size()) != dim) {
      throw InvalidInput("polynomial_problem: term has wrong number of powers");
    }
    for (int p : t.powers) {
      if (p < 0) throw InvalidInput("polynomial_problem: negative power");
    }
  }
  if (x0.size() != dim) throw InvalidInput("polynomial_problem: x0 has wrong dimension");
  if (constants.region.lo.size() != dim || constants.region.hi.size() != dim) {
    throw InvalidInput("polynomial_problem: region has wrong dimension");
  }

  auto ts = std::make_shared<const std::vector<PolynomialTerm>>(std::move(terms));
  ObjectiveOracle o;
  o.name = std::move(name);
  o.dim = dim;
  o.eval_f = [ts, dim](const Vector& x) {
    double f = 0.0;
    for (const auto& t : *ts) {
      double m = t.coef;
      for (Eigen::Index j = 0; j < dim; ++j) m *= int_pow(x[j], t.powers[j]);
      f += m;
    }
    return f;
  };
  o.eval_g = [ts, dim](const Vector& x) {
    Vector g = Vector::Zero(dim);
    for (const auto& t : *ts) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        if (t.powers[j] == 0) continue;
        double m = t.coef * t.powers[j];
        for (Eigen::Index i = 0; i < dim; ++i) {
          m *= int_pow(x[i], t.powers[i] - (i == j ? 1 : 0));
        }
        g[j] += m;
      }
    }
    return g;
  };
  o.eval_H = [ts, dim](const Vector& x) {
    Matrix h = Matrix::Zero(dim, dim);
    for (const auto& t : *ts) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index k = 0; k <= j; ++k) {
          double m = t.coef;
          if (j == k) {
            if (t.powers[j] < 2) continue;
            m *= t.powers[j] * (t.powers[j] - 1);
          } else {
            if (t.powers[j] == 0 || t.powers[k] == 0) continue;
            m *= t.powers[j] * t.powers[k];
          }
          for (Eigen::Index i = 0; i < dim; ++i) {
            const int drop = (i == j ? 1 : 0) + (i == k ? 1 : 0);
            m *= int_pow(x[i], t.powers[i] - drop);
          }
          h(j, k) += m;
        }
      }
    }
    return SymMatrix(h);
  };
  o.constants = std::move(constants);
  o.suggested_x0 = std::move(x0);
  return o;
}

ObjectiveOracle load_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open problem file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
    if (j.value("schema", "") != "trcx.problem/1") {
      throw InvalidInput("problem file: unsupported schema (expected trcx.problem/1)");
    }
    const auto dim = j.at("dim").get<Eigen::Index>();
    std::vector<PolynomialTerm> terms;
    for (const auto& t : j.at("terms")) {
      terms.push_back({t.at("coef").get<double>(), t.at("powers").get<std::vector<int>>()});
    }
    auto to_vec = [](const nlohmann::json& a) {
      const auto v = a.get<std::vector<double>>();
      return Vector(Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())));
    };
    const auto& c = j.at("constants");
    ProblemConstants pc;
    pc.L = c.at("L").get<double>();
    pc.kappa = c.at("kappa").get<double>();
    pc.f_inf = c.at("f_inf").get<double>();
    pc.region = {to_vec(c.at("region").at("lo")), to_vec(c.at("region").at("hi"))};
    if (pc.L < 0.0 || pc.kappa < 0.0) throw InvalidInput("problem file: negative constant");
    return polynomial_problem(j.at("name").get<std::string>(), dim, std::move(terms),
                              std::move(pc), to_vec(j.at("x0")));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("problem file " + path.string() + ": " + e.what());
  }
}

DerivativeReport check_derivatives(const ObjectiveOracle& o, const Vector& x, double h) {
  if (!(h > 0.0)) throw InvalidInput("check_derivatives: step must be positive");
  if (x.size() != o.dim) throw DimensionMismatch("check_derivatives: wrong point dimension");
  const Eigen::Index n = o.dim;
  const Vector g = o.eval_g(x);
  const Matrix hm = o.eval_H(x).dense();

  Vector fd_g(n);
  Matrix fd_h(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const double fp = o.eval_f(xp), fm = o.eval_f(xm);
    const Vector gp = o.eval_g(xp), gm = o.eval_g(xm);
    if (!std::isfinite(fp) || !std::isfinite(fm) || !gp.allFinite() || !gm.allFinite()) {
      throw OracleFailure("check_derivatives: non-finite value at a stencil point");
    }
    fd_g[i] = (fp - fm) / (2.0 * h);
    fd_h.col(i) = (gp - gm) / (2.0 * h);
  }

  DerivativeReport r;
  r.grad_rel_error = (fd_g - g).norm() / std::max(1.0, g.norm());
  r.hess_rel_error = (fd_h - hm).norm() / std::max(1.0, hm.norm());
  r.tolerance = std::max(10.0 * h * h, 1e-6);
  r.passed = r.grad_rel_error <= r.tolerance && r.hess_rel_error <= r.tolerance;
  return r;
}

}  // namespace trcx
