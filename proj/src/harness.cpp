#include "trcx/harness.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "trcx/adaptive_solver.hpp"
#include "trcx/bounds.hpp"
#include "trcx/errors.hpp"
#include "trcx/fixed_solver.hpp"

namespace trcx {

void ExperimentSpec::validate(bool for_sweep) const {
  if (strategy != "update1" && strategy != "update2" && strategy != "fixed") {
    throw InvalidInput("unknown strategy '" + strategy + "' (expected update1, update2 or fixed)");
  }
  if (!problem_file && problem.empty()) throw InvalidInput("no problem given");
  if (is_fixed()) {
    FixedConfig probe = fixed;
    if (beta_from_problem) probe.beta = 1.0;
    probe.validate();
  } else {
    solver.validate();
  }
  if (for_sweep) {
    if (eps_grid.empty()) throw InvalidInput("sweep: eps grid is empty");
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
      if (!(eps_grid[i] > 0.0) || !std::isfinite(eps_grid[i])) {
        throw InvalidInput("sweep: eps values must be positive and finite");
      }
      if (i > 0 && !(eps_grid[i] < eps_grid[i - 1])) {
        throw InvalidInput("sweep: eps grid must be strictly decreasing");
      }
    }
  }
}

ObjectiveOracle load_oracle(const ExperimentSpec& spec) {
  if (spec.problem_file) return load_problem_file(*spec.problem_file);
  return builtin(spec.problem, spec.dim);
}

Vector start_point(const ExperimentSpec& spec, const ObjectiveOracle& o) {
  if (!spec.x0) return o.suggested_x0;
  if (spec.x0->size() != o.dim) {
    throw InvalidInput("x0 has " + std::to_string(spec.x0->size()) + " entries, problem has dim " +
                       std::to_string(o.dim));
  }
  return *spec.x0;
}

FixedConfig resolved_fixed_config(const ExperimentSpec& spec, const ObjectiveOracle& o) {
  FixedConfig c = spec.fixed;
  if (spec.beta_from_problem) c.beta = o.constants.L > 0.0 ? 0.5 * o.constants.L : 1.0;
  return c;
}

namespace {

TraceHeader header_for(const ExperimentSpec& spec, const ObjectiveOracle& o, const Vector& x0) {
  TraceHeader h;
  h.solver = spec.strategy;
  h.problem = o.name;
  if (spec.problem_file) h.problem_file = spec.problem_file->string();
  h.dim = o.dim;
  h.constants = o.constants;
  h.x0 = x0;
  return h;
}

TraceFile run_with(const ExperimentSpec& spec, const ObjectiveOracle& o) {
  const Vector x0 = start_point(spec, o);
  TraceHeader h = header_for(spec, o, x0);
  if (spec.is_fixed()) {
    const FixedConfig cfg = resolved_fixed_config(spec, o);
    h.config = cfg;
    return make_trace(std::move(h), solve_fixed(o, x0, cfg));
  }
  SolverConfig cfg = spec.solver;
  cfg.strategy = parse_strategy(spec.strategy);
  h.config = cfg;
  return make_trace(std::move(h), solve(o, x0, cfg));
}

}  // namespace

TraceFile run_experiment(const ExperimentSpec& spec) {
  spec.validate(false);
  const ObjectiveOracle o = load_oracle(spec);
  TraceFile t = run_with(spec, o);
  if (spec.output) write_trace(*spec.output, t);
  return t;
}

std::string one_line_summary(const TraceFile& t) {
  const std::size_t iters =
      std::visit([](const auto& rows) { return rows.size(); }, t.rows);
  std::ostringstream out;
  out << std::setprecision(10) << "status=" << to_string(t.summary.status) << " iters=" << iters
      << " f=" << t.summary.final_f << " |g|=" << t.summary.final_grad_norm
      << " lambda=" << t.summary.final_lambda;
  if (t.summary.left_region) out << " (left constants region)";
  return out.str();
}

double fit_loglog_slope(const std::vector<double>& eps, const std::vector<double>& counts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < eps.size() && i < counts.size(); ++i) {
    if (!(counts[i] > 0.0) || !(eps[i] > 0.0)) continue;
    const double x = std::log(1.0 / eps[i]);
    const double y = std::log(counts[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  const double den = m * sxx - sx * sx;
  if (m < 2 || den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (m * sxy - sx * sy) / den;
}

bool SweepSummary::within_bounds() const {
  for (const auto& r : rows) {
    if (!r.constants_valid) continue;
    // For the fixed method only case-2 iterations are capped.
    const std::uint64_t counted = r.fixed ? r.kh : r.iters;
    if (counted > r.bound) return false;
  }
  return true;
}

SweepSummary sweep(const ExperimentSpec& spec, std::ostream* csv) {
  spec.validate(true);
  const ObjectiveOracle o = load_oracle(spec);
  const Vector x0 = start_point(spec, o);
  const double f0 = o.eval_f(x0);

  if (csv) *csv << kSweepCsvHeader << '\n' << std::flush;

  SweepSummary out;
  std::vector<double> eps_seen, counts_seen;
  for (double eps : spec.eps_grid) {
    ExperimentSpec one = spec;
    SweepRow row;
    row.eps = eps;
    row.fixed = spec.is_fixed();
    if (row.fixed) {
      one.fixed.eps = eps;
      const TraceFile t = run_with(one, o);
      const auto& fc = std::get<FixedCounts>(t.summary.counts);
      const FixedConfig cfg = resolved_fixed_config(one, o);
      row.iters = fc.case1 + fc.case2;
      row.successful = row.iters;
      row.kg = fc.case1;
      row.kh = fc.case2;
      row.bound = fixed_case2_bound(f0, o.constants.f_inf, eps, cfg.beta);
      row.status = t.summary.status;
      row.constants_valid = !t.summary.left_region && cfg.beta >= 0.5 * o.constants.L;
    } else {
      one.solver.eps_g = eps;
      SolverConfig cfg = one.solver;
      cfg.strategy = parse_strategy(spec.strategy);
      if (cfg.strategy == Strategy::update2) {
        one.solver.eps_H = std::cbrt(eps * eps);
        cfg.eps_H = one.solver.eps_H;
      }
      const TraceFile t = run_with(one, o);
      const auto& sc = std::get<SolveCounts>(t.summary.counts);
      row.iters = sc.successful + sc.unsuccessful;
      row.successful = sc.successful;
      row.kg = sc.kg;
      row.kh = sc.kh;
      row.bound = cfg.strategy == Strategy::update1
                      ? first_order_bound(f0, o.constants, cfg, cfg.eps_g)
                      : second_order_bound(f0, o.constants, cfg, cfg.eps_g, cfg.eps_H);
      row.status = t.summary.status;
      row.constants_valid = !t.summary.left_region;
    }

    const double count = static_cast<double>(spec.is_fixed() ? row.kh + row.kg : row.iters);
    row.slope_window = std::numeric_limits<double>::quiet_NaN();
    if (!counts_seen.empty()) {
      row.slope_window = fit_loglog_slope({eps_seen.back(), eps}, {counts_seen.back(), count});
    }
    eps_seen.push_back(eps);
    counts_seen.push_back(count);
    out.rows.push_back(row);

    if (csv) {
      *csv << std::setprecision(17) << row.eps << ',' << row.iters << ',' << row.successful << ','
           << row.kg << ',' << row.kh << ',' << row.bound << ',';
      if (!std::isnan(row.slope_window)) *csv << std::setprecision(6) << row.slope_window;
      *csv << '\n' << std::flush;
    }
  }
  out.slope = fit_loglog_slope(eps_seen, counts_seen);
  return out;
}

}  // namespace trcx
