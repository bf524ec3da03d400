#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "trcx/adaptive_solver.hpp"
#include "trcx/config.hpp"
#include "trcx/problems.hpp"

namespace trcx {

// case1: xi_k <= sqrt(eps); case2: xi_k > sqrt(eps), which forces ||s_k|| = delta.
enum class FixedCase { case1, case2 };
std::string_view to_string(FixedCase c);
FixedCase parse_fixed_case(std::string_view s);

struct FixedIterationRecord {
  std::uint64_t k = 0;
  double f = 0.0;
  double grad_norm = 0.0;
  double lambda_min = 0.0;
  double xi = 0.0;
  FixedCase kase = FixedCase::case1;
  double f_drop = 0.0;  // f_k - f_{k+1}
  std::optional<Vector> x;
};

struct FixedCounts {
  std::uint64_t case1 = 0;
  std::uint64_t case2 = 0;

  friend bool operator==(const FixedCounts&, const FixedCounts&) = default;
};

FixedCounts count_trace(const std::vector<FixedIterationRecord>& trace);

struct FixedSolveResult {
  Vector x_final;
  Status status = Status::max_iters;
  std::vector<FixedIterationRecord> trace;
  FixedCounts counts;
  double f0 = 0.0;
  double final_f = 0.0;
  double final_grad_norm = 0.0;
  double final_lambda = 0.0;
  bool left_region = false;
};

/// Fixed radius sqrt(eps)/beta, exact subproblem solves, every step accepted.
/// Stops with Status::second_order_stationary once ||g|| <= 2 eps / beta and
/// lambda_min >= -3 sqrt(eps).
FixedSolveResult solve_fixed(const ObjectiveOracle& problem, const Vector& x0,
                             const FixedConfig& cfg);

}  // namespace trcx
