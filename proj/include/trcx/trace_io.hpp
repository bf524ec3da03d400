#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "trcx/adaptive_solver.hpp"
#include "trcx/bounds.hpp"
#include "trcx/config.hpp"
#include "trcx/fixed_solver.hpp"

// JSONL trace files, schema "trcx.trace/1".
//
//   line 1      {"record": "header", "schema": "trcx.trace/1", "solver": ...,
//                "problem": ..., "dim": n, "config": {...}, "constants": {...},
//                "x0": [...], "f0": ...}
//   lines 2..   one iteration per line, keys exactly the record's fields:
//                adaptive: k, f, grad_norm, lambda_min, branch, delta, gamma,
//                          rho, model_dec, success[, x, step]
//                fixed:    k, f, grad_norm, lambda_min, xi, case, f_drop[, x]
//   last line   {"record": "summary", "status": ..., "x_final": [...],
//                "final_f": ..., "final_grad_norm": ..., "final_lambda": ...,
//                "left_region": bool, "counts": {...}}

namespace trcx {

inline constexpr const char* kTraceSchema = "trcx.trace/1";

struct TraceHeader {
  std::string solver;  // "update1", "update2" or "fixed"
  std::string problem;
  std::optional<std::string> problem_file;
  Eigen::Index dim = 0;
  std::variant<SolverConfig, FixedConfig> config;
  ProblemConstants constants;
  Vector x0;
  double f0 = 0.0;

  bool is_fixed() const { return std::holds_alternative<FixedConfig>(config); }
};

struct TraceSummary {
  Status status = Status::max_iters;
  Vector x_final;
  double final_f = 0.0;
  double final_grad_norm = 0.0;
  double final_lambda = 0.0;
  bool left_region = false;
  std::variant<SolveCounts, FixedCounts> counts;
};

struct TraceFile {
  TraceHeader header;
  std::variant<std::vector<IterationRecord>, std::vector<FixedIterationRecord>> rows;
  TraceSummary summary;
};

TraceFile make_trace(TraceHeader header, const SolveResult& r);
TraceFile make_trace(TraceHeader header, const FixedSolveResult& r);

void write_trace(std::ostream& out, const TraceFile& t);
void write_trace(const std::filesystem::path& path, const TraceFile& t);

/// Throws InvalidInput with the offending line number on malformed input.
TraceFile read_trace(std::istream& in);
TraceFile read_trace(const std::filesystem::path& path);

// Config files use the same keys as the structs; unknown keys are rejected.
void apply_config_json(const std::string& json_text, SolverConfig& cfg);
void apply_config_json(const std::string& json_text, FixedConfig& cfg);

}  // namespace trcx
