#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace trcx {

// Update 1 ties the radius to ||g|| on every iteration; Update 2 switches to
// |lambda_-| whenever ||g||^2 < |lambda_-|^3.
enum class Strategy { update1, update2 };
enum class StepKind { cauchy, exact };

std::string_view to_string(Strategy s);
std::string_view to_string(StepKind s);
Strategy parse_strategy(std::string_view s);
StepKind parse_step_kind(std::string_view s);

struct SolverConfig {
  double gamma_c = 0.5;      // unsuccessful contraction factor
  double eta = 0.25;         // acceptance threshold on rho
  double gamma_lo = 1e-8;    // floor of gamma after a success
  double gamma_hi = 1e2;     // ceiling of gamma
  double gamma0 = 1.0;
  double gamma_inc = 2.0;    // expansion on success before clamping
  Strategy strategy = Strategy::update1;
  StepKind step_kind = StepKind::cauchy;
  double eps_g = 1e-6;
  double eps_H = 1e-3;       // update2 termination only
  std::uint64_t max_iters = 1'000'000;
  bool record_x = true;      // store x_k and s_k in the trace

  /// Throws InvalidInput describing the first violated range.
  void validate() const;
};

struct FixedConfig {
  double eps = 1e-2;
  double beta = 1.0;         // L / 2
  std::uint64_t max_iters = 1'000'000;
  double trs_tol = 1e-10;
  bool record_x = true;

  double radius() const;
  void validate() const;
};

}  // namespace trcx
