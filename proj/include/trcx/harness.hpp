#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "trcx/config.hpp"
#include "trcx/problems.hpp"
#include "trcx/trace_io.hpp"

namespace trcx {

struct ExperimentSpec {
  std::string problem = "rosenbrock";
  std::optional<std::filesystem::path> problem_file;  // overrides `problem`
  Eigen::Index dim = 2;
  std::string strategy = "update1";  // update1 | update2 | fixed
  SolverConfig solver;
  FixedConfig fixed;
  bool beta_from_problem = true;     // fixed: beta = L/2 of the problem
  std::vector<double> eps_grid;      // sweep only
  std::uint64_t seed = 0;
  std::optional<Vector> x0;
  std::optional<std::filesystem::path> output;

  bool is_fixed() const { return strategy == "fixed"; }
  /// Throws InvalidInput on an unknown strategy, bad config ranges or an
  /// eps grid that is not strictly decreasing and positive.
  void validate(bool for_sweep) const;
};

ObjectiveOracle load_oracle(const ExperimentSpec& spec);
Vector start_point(const ExperimentSpec& spec, const ObjectiveOracle& o);
FixedConfig resolved_fixed_config(const ExperimentSpec& spec, const ObjectiveOracle& o);

/// Runs the configured solver once and returns its trace; writes the JSONL
/// file when spec.output is set.
TraceFile run_experiment(const ExperimentSpec& spec);

/// "status=... iters=... f=... |g|=... lambda=..."
std::string one_line_summary(const TraceFile& t);

struct SweepRow {
  double eps = 0.0;
  std::uint64_t iters = 0;
  std::uint64_t successful = 0;
  std::uint64_t kg = 0;  // case1 for the fixed method
  std::uint64_t kh = 0;  // case2 for the fixed method
  std::uint64_t bound = 0;
  double slope_window = 0.0;  // local slope against the previous row; NaN on the first
  Status status = Status::max_iters;
  bool constants_valid = true;
  bool fixed = false;
};

struct SweepSummary {
  std::vector<SweepRow> rows;
  double slope = 0.0;  // least squares fit of log(count) against log(1/eps)

  bool within_bounds() const;
};

/// Least-squares slope of log(y) against log(1/x) over entries with y > 0;
/// NaN when fewer than two usable points.
double fit_loglog_slope(const std::vector<double>& eps, const std::vector<double>& counts);

/// One solve per eps. For update1 eps is eps_g; for update2 eps is eps_g and
/// eps_H = eps^{2/3}; for the fixed method eps is its accuracy parameter and
/// `bound` is the case-2 cap. Rows are appended to `csv` (if given) as they
/// complete, so a failing run leaves the finished rows behind.
SweepSummary sweep(const ExperimentSpec& spec, std::ostream* csv = nullptr);

inline constexpr const char* kSweepCsvHeader = "eps,iters,successful,kg,kh,bound,slope_window";

}  // namespace trcx
