#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "trcx/bounds.hpp"
#include "trcx/problems.hpp"
#include "trcx/trace_io.hpp"

namespace trcx {

enum class CheckStatus { pass, fail, not_applicable };
std::string_view to_string(CheckStatus s);

/// One verifier check. `margin` is the smallest slack seen (bound minus
/// observed, so negative means violated); NaN when nothing was evaluated.
struct Check {
  std::string name;
  CheckStatus status = CheckStatus::pass;
  double margin = 0.0;
  std::uint64_t evaluated = 0;
  std::string detail;
};

struct VerifyReport {
  std::vector<Check> checks;
  std::vector<std::string> warnings;

  bool ok() const;
  const Check* find(std::string_view name) const;
};

struct VerifyOptions {
  // Absolute slack on model-decrease inequalities.
  double model_tol = 1e-10;
  // Slack on inequalities involving f values: f_tol * max(1, |f_k|).
  double f_tol = 1e-10;
  // Taylor spot checks for the fixed-radius method.
  int taylor_samples = 100;
  std::uint64_t seed = 0;
};

/// Post-hoc checks of a trust-region trace against the theory:
///   adaptive traces: bookkeeping, ratio and radius consistency, I1..I8;
///   fixed traces:    bookkeeping, P1..P3, and P4 when `oracle` is given.
/// Bound checks whose constants do not cover the visited points are reported
/// as not applicable, with a warning.
VerifyReport verify_trace(const TraceFile& trace, const ProblemConstants& constants,
                          const ObjectiveOracle* oracle = nullptr, const VerifyOptions& opts = {});

}  // namespace trcx
