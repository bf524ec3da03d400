#include "trcx/trace_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "trcx/errors.hpp"

namespace trcx {

using nlohmann::json;

namespace {

json vec_to_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector vec_from_json(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json config_to_json(const SolverConfig& c) {
  return {{"gamma_c", c.gamma_c},     {"eta", c.eta},
          {"gamma_lo", c.gamma_lo},   {"gamma_hi", c.gamma_hi},
          {"gamma0", c.gamma0},       {"gamma_inc", c.gamma_inc},
          {"strategy", to_string(c.strategy)}, {"step_kind", to_string(c.step_kind)},
          {"eps_g", c.eps_g},         {"eps_H", c.eps_H},
          {"max_iters", c.max_iters}, {"record_x", c.record_x}};
}

json config_to_json(const FixedConfig& c) {
  return {{"eps", c.eps},
          {"beta", c.beta},
          {"max_iters", c.max_iters},
          {"trs_tol", c.trs_tol},
          {"record_x", c.record_x}};
}

const std::set<std::string>& known_config_keys() {
  static const std::set<std::string> keys = {
      "gamma_c", "eta",   "gamma_lo", "gamma_hi", "gamma0",  "gamma_inc", "strategy",
      "step_kind", "eps_g", "eps_H",  "max_iters", "record_x", "eps",     "beta", "trs_tol"};
  return keys;
}

template <typename T>
void take(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void apply_keys(const json& j, SolverConfig& c) {
  take(j, "gamma_c", c.gamma_c);
  take(j, "eta", c.eta);
  take(j, "gamma_lo", c.gamma_lo);
  take(j, "gamma_hi", c.gamma_hi);
  take(j, "gamma0", c.gamma0);
  take(j, "gamma_inc", c.gamma_inc);
  if (j.contains("strategy")) c.strategy = parse_strategy(j.at("strategy").get<std::string>());
  if (j.contains("step_kind")) c.step_kind = parse_step_kind(j.at("step_kind").get<std::string>());
  take(j, "eps_g", c.eps_g);
  take(j, "eps_H", c.eps_H);
  take(j, "max_iters", c.max_iters);
  take(j, "record_x", c.record_x);
}

void apply_keys(const json& j, FixedConfig& c) {
  take(j, "eps", c.eps);
  take(j, "beta", c.beta);
  take(j, "max_iters", c.max_iters);
  take(j, "trs_tol", c.trs_tol);
  take(j, "record_x", c.record_x);
}

json constants_to_json(const ProblemConstants& c) {
  return {{"L", c.L},
          {"kappa", c.kappa},
          {"f_inf", c.f_inf},
          {"region", {{"lo", vec_to_json(c.region.lo)}, {"hi", vec_to_json(c.region.hi)}}}};
}

ProblemConstants constants_from_json(const json& j) {
  ProblemConstants c;
  c.L = j.at("L").get<double>();
  c.kappa = j.at("kappa").get<double>();
  c.f_inf = j.at("f_inf").get<double>();
  c.region = {vec_from_json(j.at("region").at("lo")), vec_from_json(j.at("region").at("hi"))};
  return c;
}

json row_to_json(const IterationRecord& r) {
  json j = {{"k", r.k},
            {"f", r.f},
            {"grad_norm", r.grad_norm},
            {"lambda_min", r.lambda_min},
            {"branch", to_string(r.branch)},
            {"delta", r.delta},
            {"gamma", r.gamma},
            {"rho", r.rho},
            {"model_dec", r.model_dec},
            {"success", r.success}};
  if (r.x) j["x"] = vec_to_json(*r.x);
  if (r.step) j["step"] = vec_to_json(*r.step);
  return j;
}

json row_to_json(const FixedIterationRecord& r) {
  json j = {{"k", r.k},
            {"f", r.f},
            {"grad_norm", r.grad_norm},
            {"lambda_min", r.lambda_min},
            {"xi", r.xi},
            {"case", to_string(r.kase)},
            {"f_drop", r.f_drop}};
  if (r.x) j["x"] = vec_to_json(*r.x);
  return j;
}

IterationRecord adaptive_row(const json& j) {
  IterationRecord r;
  r.k = j.at("k").get<std::uint64_t>();
  r.f = j.at("f").get<double>();
  r.grad_norm = j.at("grad_norm").get<double>();
  r.lambda_min = j.at("lambda_min").get<double>();
  r.branch = parse_branch(j.at("branch").get<std::string>());
  r.delta = j.at("delta").get<double>();
  r.gamma = j.at("gamma").get<double>();
  r.rho = j.at("rho").get<double>();
  r.model_dec = j.at("model_dec").get<double>();
  r.success = j.at("success").get<bool>();
  if (j.contains("x")) r.x = vec_from_json(j.at("x"));
  if (j.contains("step")) r.step = vec_from_json(j.at("step"));
  return r;
}

FixedIterationRecord fixed_row(const json& j) {
  FixedIterationRecord r;
  r.k = j.at("k").get<std::uint64_t>();
  r.f = j.at("f").get<double>();
  r.grad_norm = j.at("grad_norm").get<double>();
  r.lambda_min = j.at("lambda_min").get<double>();
  r.xi = j.at("xi").get<double>();
  r.kase = parse_fixed_case(j.at("case").get<std::string>());
  r.f_drop = j.at("f_drop").get<double>();
  if (j.contains("x")) r.x = vec_from_json(j.at("x"));
  return r;
}

json counts_to_json(const SolveCounts& c) {
  return {{"successful", c.successful},
          {"unsuccessful", c.unsuccessful},
          {"kg", c.kg},
          {"kh", c.kh},
          {"longest_unsuccessful_run", c.longest_unsuccessful_run}};
}

json counts_to_json(const FixedCounts& c) { return {{"case1", c.case1}, {"case2", c.case2}}; }

TraceSummary summary_common(Status status, const Vector& x, double f, double g, double lam,
                            bool left) {
  TraceSummary s;
  s.status = status;
  s.x_final = x;
  s.final_f = f;
  s.final_grad_norm = g;
  s.final_lambda = lam;
  s.left_region = left;
  return s;
}

}  // namespace

TraceFile make_trace(TraceHeader header, const SolveResult& r) {
  TraceFile t;
  header.f0 = r.f0;
  t.header = std::move(header);
  t.rows = r.trace;
  t.summary = summary_common(r.status, r.x_final, r.final_f, r.final_grad_norm, r.final_lambda,
                             r.left_region);
  t.summary.counts = r.counts;
  return t;
}

TraceFile make_trace(TraceHeader header, const FixedSolveResult& r) {
  TraceFile t;
  header.f0 = r.f0;
  t.header = std::move(header);
  t.rows = r.trace;
  t.summary = summary_common(r.status, r.x_final, r.final_f, r.final_grad_norm, r.final_lambda,
                             r.left_region);
  t.summary.counts = r.counts;
  return t;
}

void write_trace(std::ostream& out, const TraceFile& t) {
  const TraceHeader& h = t.header;
  json head = {{"record", "header"},
               {"schema", kTraceSchema},
               {"solver", h.solver},
               {"problem", h.problem},
               {"dim", h.dim},
               {"constants", constants_to_json(h.constants)},
               {"x0", vec_to_json(h.x0)},
               {"f0", h.f0}};
  if (h.problem_file) head["problem_file"] = *h.problem_file;
  std::visit([&](const auto& c) { head["config"] = config_to_json(c); }, h.config);
  out << head.dump() << '\n';

  std::visit(
      [&](const auto& rows) {
        for (const auto& r : rows) out << row_to_json(r).dump() << '\n';
      },
      t.rows);

  const TraceSummary& s = t.summary;
  json tail = {{"record", "summary"},
               {"status", to_string(s.status)},
               {"x_final", vec_to_json(s.x_final)},
               {"final_f", s.final_f},
               {"final_grad_norm", s.final_grad_norm},
               {"final_lambda", s.final_lambda},
               {"left_region", s.left_region}};
  std::visit([&](const auto& c) { tail["counts"] = counts_to_json(c); }, s.counts);
  out << tail.dump() << '\n';
}

void write_trace(const std::filesystem::path& path, const TraceFile& t) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open trace file for writing: " + path.string());
  write_trace(out, t);
  if (!out) throw Error("failed writing trace file: " + path.string());
}

TraceFile read_trace(std::istream& in) {
  TraceFile t;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  bool have_summary = false;
  std::vector<IterationRecord> adaptive;
  std::vector<FixedIterationRecord> fixed;

  auto fail = [&](const std::string& why) -> InvalidInput {
    return InvalidInput("trace line " + std::to_string(lineno) + ": " + why);
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (have_summary) throw fail("content after summary record");
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw fail(std::string("not valid JSON: ") + e.what());
    }
    try {
      const std::string kind = j.contains("record") ? j.at("record").get<std::string>() : "";
      if (!have_header) {
        if (kind != "header") throw fail("first record must be the header");
        if (j.at("schema").get<std::string>() != kTraceSchema) throw fail("unsupported schema");
        TraceHeader& h = t.header;
        h.solver = j.at("solver").get<std::string>();
        h.problem = j.at("problem").get<std::string>();
        if (j.contains("problem_file")) h.problem_file = j.at("problem_file").get<std::string>();
        h.dim = j.at("dim").get<Eigen::Index>();
        h.constants = constants_from_json(j.at("constants"));
        h.x0 = vec_from_json(j.at("x0"));
        h.f0 = j.at("f0").get<double>();
        if (h.solver == "fixed") {
          FixedConfig c;
          apply_keys(j.at("config"), c);
          h.config = c;
        } else if (h.solver == "update1" || h.solver == "update2") {
          SolverConfig c;
          apply_keys(j.at("config"), c);
          h.config = c;
        } else {
          throw fail("unknown solver '" + h.solver + "'");
        }
        have_header = true;
      } else if (kind == "summary") {
        TraceSummary& s = t.summary;
        s.status = parse_status(j.at("status").get<std::string>());
        s.x_final = vec_from_json(j.at("x_final"));
        s.final_f = j.at("final_f").get<double>();
        s.final_grad_norm = j.at("final_grad_norm").get<double>();
        s.final_lambda = j.at("final_lambda").get<double>();
        s.left_region = j.at("left_region").get<bool>();
        const json& c = j.at("counts");
        if (t.header.is_fixed()) {
          s.counts = FixedCounts{c.at("case1").get<std::uint64_t>(), c.at("case2").get<std::uint64_t>()};
        } else {
          s.counts = SolveCounts{c.at("successful").get<std::uint64_t>(),
                                 c.at("unsuccessful").get<std::uint64_t>(),
                                 c.at("kg").get<std::uint64_t>(), c.at("kh").get<std::uint64_t>(),
                                 c.at("longest_unsuccessful_run").get<std::uint64_t>()};
        }
        have_summary = true;
      } else if (!kind.empty()) {
        throw fail("unexpected record '" + kind + "'");
      } else if (t.header.is_fixed()) {
        fixed.push_back(fixed_row(j));
      } else {
        adaptive.push_back(adaptive_row(j));
      }
    } catch (const json::exception& e) {
      throw fail(e.what());
    } catch (const InvalidInput& e) {
      if (std::string(e.what()).rfind("trace line", 0) == 0) throw;
      throw fail(e.what());
    }
  }
  if (!have_header) throw InvalidInput("trace: missing header");
  if (!have_summary) throw InvalidInput("trace: missing summary record (truncated file?)");
  if (t.header.is_fixed()) {
    t.rows = std::move(fixed);
  } else {
    t.rows = std::move(adaptive);
  }
  return t;
}

TraceFile read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open trace file " + path.string());
  return read_trace(in);
}

namespace {

json parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config: not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidInput("config: top level must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!known_config_keys().count(key)) throw InvalidInput("config: unknown key '" + key + "'");
  }
  return j;
}

}  // namespace

void apply_config_json(const std::string& json_text, SolverConfig& cfg) {
  const json j = parse_config(json_text);
  try {
    apply_keys(j, cfg);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
}

void apply_config_json(const std::string& json_text, FixedConfig& cfg) {
  const json j = parse_config(json_text);
  try {
    apply_keys(j, cfg);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
}

}  // namespace trcx
