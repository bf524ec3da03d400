#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "trcx/config.hpp"
#include "trcx/linalg.hpp"
#include "trcx/problems.hpp"

namespace trcx {

// K_g: radius tied to ||g_k||; K_H: radius tied to |(lambda_k)_-|.
enum class Branch { K_g, K_H };
std::string_view to_string(Branch b);
Branch parse_branch(std::string_view s);

enum class Status { first_order_stationary, second_order_stationary, max_iters };
std::string_view to_string(Status s);
Status parse_status(std::string_view s);

struct IterationRecord {
  std::uint64_t k = 0;
  double f = 0.0;
  double grad_norm = 0.0;
  double lambda_min = 0.0;
  Branch branch = Branch::K_g;
  double delta = 0.0;
  double gamma = 0.0;
  double rho = 0.0;
  double model_dec = 0.0;
  bool success = false;
  std::optional<Vector> x;     // x_k, when SolverConfig::record_x
  std::optional<Vector> step;  // s_k, same gate
};

struct SolveCounts {
  std::uint64_t successful = 0;
  std::uint64_t unsuccessful = 0;
  std::uint64_t kg = 0;
  std::uint64_t kh = 0;
  std::uint64_t longest_unsuccessful_run = 0;

  friend bool operator==(const SolveCounts&, const SolveCounts&) = default;
};

SolveCounts count_trace(const std::vector<IterationRecord>& trace);

struct SolveResult {
  Vector x_final;
  Status status = Status::max_iters;
  std::vector<IterationRecord> trace;
  SolveCounts counts;
  double f0 = 0.0;
  double final_f = 0.0;
  double final_grad_norm = 0.0;
  double final_lambda = 0.0;
  bool left_region = false;  // some x_k or trial point outside the constants' box
};

/// gamma * ||g||.
double radius_update1(double gamma, double grad_norm);

/// Update 2: (gamma ||g||, K_g) if lambda >= 0 or ||g||^2 >= |lambda_-|^3,
/// else (gamma |lambda_-|, K_H).
std::pair<double, Branch> radius_update2(double gamma, double grad_norm, double lambda);

/// (f_k - f_trial) / model_dec. Throws DegenerateModel if model_dec <= 0.
double rho(double f_k, double f_trial, double model_dec);

/// rho >= eta: accept and move gamma to clamp(gamma * gamma_inc, gamma_lo, gamma_hi).
/// Otherwise reject and contract gamma by gamma_c with no lower clamp.
std::pair<bool, double> accept_and_update_gamma(double rho, const SolverConfig& cfg, double gamma);

/// Trust-region loop with the radius set from gamma_k and either ||g_k|| or
/// |(lambda_k)_-| according to cfg.strategy. Stationarity is tested at the top
/// of each iteration, before the radius is formed; reaching cfg.max_iters
/// returns Status::max_iters.
SolveResult solve(const ObjectiveOracle& problem, const Vector& x0, const SolverConfig& cfg);

}  // namespace trcx
