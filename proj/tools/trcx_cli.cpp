// trcx: command-line front end for the trust-region solvers.
//
// Exit codes: 0 success, 1 invariant violation, 2 usage error, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "trcx/bounds.hpp"
#include "trcx/errors.hpp"
#include "trcx/harness.hpp"
#include "trcx/problems.hpp"
#include "trcx/trace_io.hpp"
#include "trcx/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;
constexpr int kNumerical = 3;

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw trcx::InvalidInput(std::string(what) + ": cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw trcx::InvalidInput(std::string(what) + ": empty list");
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw trcx::InvalidInput("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Flags shared by run, sweep and bounds.
struct CommonFlags {
  std::string problem = "rosenbrock";
  std::string problem_file;
  long dim = 2;
  std::string strategy = "update1";
  std::string step = "cauchy";
  double eps_g = 0.0;
  double eps_h = 0.0;
  double eps = 0.0;
  std::string x0;
  std::string config;
  std::string output;
  std::uint64_t seed = 0;
  std::uint64_t max_iters = 0;
  CLI::App* app = nullptr;

  void attach(CLI::App* sub) {
    app = sub;
    sub->add_option("--problem", problem, "builtin problem name")
        ->check(CLI::IsMember(trcx::builtin_names()));
    sub->add_option("--problem-file", problem_file, "polynomial problem file (JSON)");
    sub->add_option("--dim", dim, "problem dimension")->check(CLI::PositiveNumber);
    sub->add_option("--strategy", strategy, "update1, update2 or fixed")
        ->check(CLI::IsMember({"update1", "update2", "fixed"}));
    sub->add_option("--step", step, "adaptive step: cauchy or exact")
        ->check(CLI::IsMember({"cauchy", "exact"}));
    sub->add_option("--eps-g", eps_g, "gradient tolerance");
    sub->add_option("--eps-h", eps_h, "curvature tolerance (update2)");
    sub->add_option("--eps", eps, "fixed-radius accuracy parameter");
    sub->add_option("--x0", x0, "start point, comma separated");
    sub->add_option("--config", config, "JSON config with SolverConfig/FixedConfig keys");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--max-iters", max_iters, "iteration cap");
  }

  bool given(const char* flag) const { return app->count(flag) > 0; }

  trcx::ExperimentSpec spec() const {
    trcx::ExperimentSpec s;
    s.problem = problem;
    if (!problem_file.empty()) s.problem_file = problem_file;
    s.dim = dim;
    s.strategy = strategy;
    s.seed = seed;
    if (!config.empty()) {
      const std::string text = read_file(config);
      trcx::apply_config_json(text, s.solver);
      trcx::apply_config_json(text, s.fixed);
      const auto j = nlohmann::json::parse(text);
      if (j.contains("beta")) s.beta_from_problem = false;
      if (j.contains("strategy") && !given("--strategy")) {
        s.strategy = j.at("strategy").get<std::string>();
      }
    }
    s.solver.strategy = s.strategy == "update2" ? trcx::Strategy::update2 : trcx::Strategy::update1;
    if (given("--step")) s.solver.step_kind = trcx::parse_step_kind(step);
    if (given("--eps-g")) s.solver.eps_g = eps_g;
    if (given("--eps-h")) s.solver.eps_H = eps_h;
    if (given("--eps")) s.fixed.eps = eps;
    if (given("--max-iters")) {
      s.solver.max_iters = max_iters;
      s.fixed.max_iters = max_iters;
    }
    if (!x0.empty()) {
      const auto v = parse_list(x0, "--x0");
      s.x0 = trcx::Vector::Map(v.data(), static_cast<Eigen::Index>(v.size()));
    }
    return s;
  }
};

int cmd_run(const CommonFlags& f) {
  trcx::ExperimentSpec s = f.spec();
  if (!f.output.empty()) s.output = f.output;
  const trcx::TraceFile t = trcx::run_experiment(s);
  std::cout << trcx::one_line_summary(t) << '\n';
  return kOk;
}

int cmd_sweep(const CommonFlags& f, const std::string& grid) {
  trcx::ExperimentSpec s = f.spec();
  s.eps_grid = parse_list(grid, "--grid");
  if (s.eps_grid.size() < 4 || s.eps_grid.front() / s.eps_grid.back() < 100.0) {
    std::cerr << "warning: grid has fewer than 4 points or spans less than 2 decades; "
                 "the fitted slope is unreliable\n";
  }
  trcx::SweepSummary sum;
  if (f.output.empty()) {
    sum = trcx::sweep(s, &std::cout);
  } else {
    std::ofstream out(f.output);
    if (!out) throw trcx::InvalidInput("cannot open " + f.output + " for writing");
    sum = trcx::sweep(s, &out);
  }
  std::cerr << "slope=" << sum.slope << '\n';
  for (const auto& r : sum.rows) {
    if (!r.constants_valid) {
      std::cerr << "warning: eps=" << r.eps << " left the constants' region; bound not checked\n";
    }
  }
  if (!sum.within_bounds()) {
    std::cerr << "violation: an observed count exceeds its theoretical bound\n";
    return kViolation;
  }
  return kOk;
}

int cmd_verify(const std::string& trace_path, std::uint64_t seed, int samples) {
  const trcx::TraceFile t = trcx::read_trace(std::filesystem::path(trace_path));
  std::optional<trcx::ObjectiveOracle> oracle;
  try {
    if (t.header.problem_file) {
      oracle = trcx::load_problem_file(*t.header.problem_file);
    } else {
      oracle = trcx::builtin(t.header.problem, t.header.dim);
    }
  } catch (const trcx::Error& e) {
    std::cerr << "warning: objective unavailable (" << e.what() << "); sampling checks skipped\n";
  }
  trcx::VerifyOptions opts;
  opts.seed = seed;
  opts.taylor_samples = samples;
  const trcx::VerifyReport rep =
      trcx::verify_trace(t, t.header.constants, oracle ? &*oracle : nullptr, opts);
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& c : rep.checks) {
    std::cout << std::left << std::setw(22) << c.name << ' ' << std::setw(14)
              << trcx::to_string(c.status) << " margin=" << std::setprecision(6) << c.margin
              << " n=" << c.evaluated;
    if (!c.detail.empty()) std::cout << "  " << c.detail;
    std::cout << '\n';
  }
  return rep.ok() ? kOk : kViolation;
}

int cmd_bounds(const CommonFlags& f) {
  const trcx::ExperimentSpec s = f.spec();
  s.validate(false);
  const trcx::ObjectiveOracle o = trcx::load_oracle(s);
  const trcx::Vector x0 = trcx::start_point(s, o);
  const double f0 = o.eval_f(x0);
  const auto& c = o.constants;
  const double gmin = trcx::gamma_min(s.solver, c);
  std::cout << std::setprecision(12);
  std::cout << "problem " << o.name << " dim " << o.dim << '\n'
            << "L " << c.L << " kappa " << c.kappa << " f_inf " << c.f_inf << " f0 " << f0 << '\n'
            << "gamma_min " << gmin << '\n'
            << "kappa_min " << trcx::kappa_min(s.solver.eta, gmin) << '\n'
            << "unsuccessful_run_cap " << trcx::unsuccessful_run_cap(s.solver, c) << '\n'
            << "first_order_bound " << trcx::first_order_bound(f0, c, s.solver, s.solver.eps_g) << '\n'
            << "second_order_bound "
            << trcx::second_order_bound(f0, c, s.solver, s.solver.eps_g, s.solver.eps_H) << '\n';
  const trcx::FixedConfig fc = trcx::resolved_fixed_config(s, o);
  std::cout << "fixed_beta " << fc.beta << '\n'
            << "fixed_case2_min_drop " << trcx::fixed_case2_min_drop(fc.eps, fc.beta) << '\n'
            << "fixed_case2_bound " << trcx::fixed_case2_bound(f0, c.f_inf, fc.eps, fc.beta)
            << '\n';
  return kOk;
}

int cmd_check_derivatives(const CommonFlags& f, int points, double h) {
  const trcx::ExperimentSpec s = f.spec();
  const trcx::ObjectiveOracle o = trcx::load_oracle(s);
  std::mt19937_64 rng(s.seed);
  const auto& box = o.constants.region;
  bool all = true;
  double worst_g = 0.0, worst_h = 0.0;
  for (int p = 0; p < points; ++p) {
    trcx::Vector x(o.dim);
    for (Eigen::Index i = 0; i < o.dim; ++i) {
      // Sample within the region, clipped to a moderate window.
      const double lo = std::max(box.lo(i), -5.0), hi = std::min(box.hi(i), 5.0);
      x(i) = std::uniform_real_distribution<double>(lo, hi)(rng);
    }
    const auto rep = trcx::check_derivatives(o, x, h);
    worst_g = std::max(worst_g, rep.grad_rel_error);
    worst_h = std::max(worst_h, rep.hess_rel_error);
    all = all && rep.passed;
  }
  std::cout << std::setprecision(3) << o.name << ": points=" << points
            << " max_grad_rel_err=" << worst_g << " max_hess_rel_err=" << worst_h << ' '
            << (all ? "pass" : "FAIL") << '\n';
  return all ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trust-region solvers with coupled radius rules and complexity checks"};
  app.require_subcommand(1);

  CommonFlags run_flags, sweep_flags, bounds_flags, deriv_flags;
  std::string grid = "1e-2,1e-3,1e-4,1e-5";
  std::string trace_path;
  std::uint64_t verify_seed = 0;
  int samples = 100;
  int points = 20;
  double h = 1e-5;

  auto* run = app.add_subcommand("run", "run one solve and write its trace");
  run_flags.attach(run);
  run->add_option("--output", run_flags.output, "trace file (JSONL)");

  auto* sw = app.add_subcommand("sweep", "one solve per eps, CSV of counts and bounds");
  sweep_flags.attach(sw);
  sw->add_option("--grid", grid, "strictly decreasing eps values, comma separated");
  sw->add_option("--output", sweep_flags.output, "CSV file (default stdout)");

  auto* ver = app.add_subcommand("verify", "check a trace against the theory");
  ver->add_option("--trace", trace_path, "trace file")->required();
  ver->add_option("--seed", verify_seed, "seed for sampled checks");
  ver->add_option("--samples", samples, "Taylor spot checks per iteration set")
      ->check(CLI::NonNegativeNumber);

  auto* bnd = app.add_subcommand("bounds", "print gamma_min, kappa_min and iteration caps");
  bounds_flags.attach(bnd);

  auto* der = app.add_subcommand("check-derivatives", "finite-difference check of g and H");
  deriv_flags.attach(der);
  der->add_option("--points", points, "number of sampled points")->check(CLI::PositiveNumber);
  der->add_option("--step-size", h, "difference step")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(run_flags);
    if (*sw) return cmd_sweep(sweep_flags, grid);
    if (*ver) return cmd_verify(trace_path, verify_seed, samples);
    if (*bnd) return cmd_bounds(bounds_flags);
    if (*der) return cmd_check_derivatives(deriv_flags, points, h);
  } catch (const trcx::InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}
