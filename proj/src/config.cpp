#include "trcx/config.hpp"

#include <cmath>

#include "trcx/errors.hpp"

namespace trcx {

std::string_view to_string(Strategy s) {
  return s == Strategy::update1 ? "update1" : "update2";
}

std::string_view to_string(StepKind s) { return s == StepKind::cauchy ? "cauchy" : "exact"; }

Strategy parse_strategy(std::string_view s) {
  if (s == "update1") return Strategy::update1;
  if (s == "update2") return Strategy::update2;
  throw InvalidInput("unknown strategy '" + std::string(s) + "'");
}

StepKind parse_step_kind(std::string_view s) {
  if (s == "cauchy") return StepKind::cauchy;
  if (s == "exact") return StepKind::exact;
  throw InvalidInput("unknown step kind '" + std::string(s) + "'");
}

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvalidInput(std::string("invalid solver config: ") + what);
}

}  // namespace

void SolverConfig::validate() const {
  require(gamma_c > 0.0 && gamma_c < 1.0, "gamma_c must lie in (0,1)");
  require(eta > 0.0 && eta < 1.0, "eta must lie in (0,1)");
  require(gamma_lo > 0.0 && gamma_lo <= gamma_hi && std::isfinite(gamma_hi),
          "need 0 < gamma_lo <= gamma_hi < inf");
  require(gamma0 >= gamma_lo && gamma0 <= gamma_hi, "gamma0 must lie in [gamma_lo, gamma_hi]");
  require(gamma_inc >= 1.0, "gamma_inc must be >= 1");
  require(eps_g > 0.0 && eps_H > 0.0, "eps_g and eps_H must be positive");
}

double FixedConfig::radius() const { return std::sqrt(eps) / beta; }

void FixedConfig::validate() const {
  require(eps > 0.0 && std::isfinite(eps), "eps must be positive");
  require(beta > 0.0 && std::isfinite(beta), "beta must be positive");
  require(trs_tol > 0.0, "trs_tol must be positive");
}

}  // namespace trcx
