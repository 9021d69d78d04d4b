#pragma once

// Experiment configuration files (JSON, strict keys) and the CSV / JSON
// writers used by the command-line tool.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "jacobi/clt.hpp"
#include "jacobi/error.hpp"
#include "jacobi/limits.hpp"
#include "jacobi/params.hpp"
#include "jacobi/walk.hpp"

namespace jacobi::io {

using nlohmann::json;

/// Shortest decimal text that parses back to exactly the same double.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// A JSON object whose keys are checked against an allow-list on construction.
class Section {
 public:
  Section(const json& j, std::string name, std::initializer_list<const char*> allowed)
      : j_(j), name_(std::move(name)) {
    if (!j.is_object()) throw ConfigError(name_ + ": expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items())
      if (!ok.count(key)) throw ConfigError(name_ + ": unknown key '" + key + "'");
  }

  bool has(const char* key) const { return j_.contains(key); }

  double number(const char* key) const {
    const auto& v = at(key);
    if (!v.is_number()) throw ConfigError(where(key) + " must be a number");
    return v.get<double>();
  }
  double number_or(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

  long long integer(const char* key) const {
    const auto& v = at(key);
    if (!v.is_number_integer()) throw ConfigError(where(key) + " must be an integer");
    return v.get<long long>();
  }
  long long integer_or(const char* key, long long fallback) const { return has(key) ? integer(key) : fallback; }

  std::uint64_t unsigned_integer(const char* key) const {
    const auto& v = at(key);
    if (!v.is_number_unsigned()) throw ConfigError(where(key) + " must be a non-negative integer");
    return v.get<std::uint64_t>();
  }

  bool boolean_or(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto& v = at(key);
    if (!v.is_boolean()) throw ConfigError(where(key) + " must be true or false");
    return v.get<bool>();
  }

  std::string string(const char* key) const {
    const auto& v = at(key);
    if (!v.is_string()) throw ConfigError(where(key) + " must be a string");
    return v.get<std::string>();
  }
  std::string string_or(const char* key, std::string fallback) const {
    return has(key) ? string(key) : std::move(fallback);
  }

  std::vector<double> numbers(const char* key) const {
    const auto& v = at(key);
    if (!v.is_array() || v.empty()) throw ConfigError(where(key) + " must be a non-empty array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) throw ConfigError(where(key) + " must contain only numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  std::vector<int> integers(const char* key) const {
    const auto& v = at(key);
    if (!v.is_array() || v.empty()) throw ConfigError(where(key) + " must be a non-empty array of integers");
    std::vector<int> out;
    for (const auto& x : v) {
      if (!x.is_number_integer()) throw ConfigError(where(key) + " must contain only integers");
      out.push_back(x.get<int>());
    }
    return out;
  }

  const json& at(const char* key) const {
    if (!j_.contains(key)) throw ConfigError(where(key) + " is required");
    return j_.at(key);
  }

 private:
  std::string where(const char* key) const { return name_ + "." + key; }
  const json& j_;
  std::string name_;
};

/// {"alpha": a, "beta": b} or the hyperbolic form {"field_dim": d, "k": k}.
inline JacobiParams parse_params(const json& j) {
  Section s(j, "params", {"alpha", "beta", "field_dim", "k"});
  const bool direct = s.has("alpha") || s.has("beta");
  const bool hyper = s.has("field_dim") || s.has("k");
  if (direct == hyper) throw ConfigError("params: give either alpha/beta or field_dim/k");
  try {
    if (hyper) return hyperbolic_params({static_cast<int>(s.integer("field_dim")), static_cast<int>(s.integer("k"))});
    return JacobiParams(s.number("alpha"), s.number("beta"));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("params: ") + e.what());
  }
}

/// Step law: point_mass {point}, atoms {atoms: [[x, w], ...]}, uniform {a, b},
/// truncated_exponential {rate, cap}.
inline StepDistribution parse_nu(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("nu: object with a 'kind' is required");
  const std::string kind = j.at("kind").is_string() ? j.at("kind").get<std::string>() : "";
  try {
    if (kind == "point_mass") {
      Section s(j, "nu", {"kind", "point"});
      return StepDistribution::point_mass(s.number("point"));
    }
    if (kind == "atoms") {
      Section s(j, "nu", {"kind", "atoms"});
      const auto& arr = s.at("atoms");
      if (!arr.is_array() || arr.empty()) throw ConfigError("nu.atoms must be a non-empty array");
      std::vector<Atom> atoms;
      for (const auto& a : arr) {
        if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
          throw ConfigError("nu.atoms entries must be [point, weight]");
        atoms.push_back({a[0].get<double>(), a[1].get<double>()});
      }
      return StepDistribution::atoms(std::move(atoms));
    }
    if (kind == "uniform") {
      Section s(j, "nu", {"kind", "a", "b"});
      return StepDistribution::uniform(s.number("a"), s.number("b"));
    }
    if (kind == "truncated_exponential") {
      Section s(j, "nu", {"kind", "rate", "cap"});
      return StepDistribution::truncated_exponential(s.number("rate"), s.number("cap"));
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("nu: ") + e.what());
  }
  throw ConfigError("nu.kind must be point_mass, atoms, uniform or truncated_exponential");
}

inline json nu_to_json(const StepDistribution& nu) {
  return std::visit(
      [](const auto& l) -> json {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, AtomsLaw>) {
          json atoms = json::array();
          for (const auto& a : l.atoms) atoms.push_back({a.point, a.weight});
          return {{"kind", "atoms"}, {"atoms", atoms}};
        } else if constexpr (std::is_same_v<L, UniformLaw>) {
          return {{"kind", "uniform"}, {"a", l.a}, {"b", l.b}};
        } else {
          return {{"kind", "truncated_exponential"}, {"rate", l.rate}, {"cap", l.cap}};
        }
      },
      nu.law());
}

inline json params_to_json(const JacobiParams& p) {
  return {{"alpha", p.alpha()}, {"beta", p.beta()}, {"rho", p.rho()}, {"kind", to_string(p.kind())}};
}

struct OutputSpec {
  std::string csv;          ///< main table (finals, residuals, per-n summary)
  std::string json;         ///< summary document
  std::string samples_csv;  ///< normalized statistic of a CLT run
  std::string paths_csv;    ///< full walk trajectories (record_paths)
};

/// Top-level experiment document.
struct ExperimentFile {
  std::optional<JacobiParams> params;
  std::optional<StepDistribution> nu;
  json experiment;
  std::string operation;
  OutputSpec output;
  std::uint64_t seed = 0;
  std::optional<unsigned> threads;

  const JacobiParams& require_params() const {
    if (!params) throw ConfigError("params section is required for this experiment");
    return *params;
  }
  const StepDistribution& require_nu() const {
    if (!nu) throw ConfigError("nu section is required for this experiment");
    return *nu;
  }
};

inline ExperimentFile parse_experiment(const json& j) {
  Section top(j, "config", {"params", "nu", "experiment", "output", "seed", "threads"});
  ExperimentFile f;
  if (top.has("params")) f.params = parse_params(top.at("params"));
  if (top.has("nu")) f.nu = parse_nu(top.at("nu"));
  f.experiment = top.at("experiment");
  if (!f.experiment.is_object() || !f.experiment.contains("operation") || !f.experiment.at("operation").is_string())
    throw ConfigError("experiment.operation is required");
  f.operation = f.experiment.at("operation").get<std::string>();
  f.seed = top.has("seed") ? top.unsigned_integer("seed") : 0;
  if (top.has("threads")) {
    const auto t = top.integer("threads");
    if (t < 0) throw ConfigError("config.threads must be >= 0");
    f.threads = static_cast<unsigned>(t);
  }
  if (top.has("output")) {
    Section o(top.at("output"), "output", {"csv", "json", "samples_csv", "paths_csv"});
    f.output.csv = o.string_or("csv", "");
    f.output.json = o.string_or("json", "");
    f.output.samples_csv = o.string_or("samples_csv", "");
    f.output.paths_csv = o.string_or("paths_csv", "");
  }
  return f;
}

inline ExperimentFile load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_experiment(j);
}

// ---------------------------------------------------------------- walk

struct WalkExperiment {
  WalkConfig config;
  bool record_paths = false;
};

inline WalkExperiment parse_walk(const ExperimentFile& f) {
  Section s(f.experiment, "experiment", {"operation", "steps", "replicas", "compression_exponent", "record_paths"});
  if (f.operation != "walk") throw ConfigError("experiment.operation must be 'walk' for this command");
  WalkExperiment w;
  w.config.params = f.require_params();
  w.config.nu = f.require_nu();
  w.config.steps = static_cast<int>(s.integer("steps"));
  w.config.replicas = static_cast<int>(s.integer("replicas"));
  w.config.compression_exponent = s.number_or("compression_exponent", 0.0);
  w.config.seed = f.seed;
  w.record_paths = s.boolean_or("record_paths", false);
  try {
    w.config.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return w;
}

inline json walk_summary(const WalkConfig& cfg, const WalkResult& res) {
  std::vector<double> sorted = res.finals;
  std::sort(sorted.begin(), sorted.end());
  const EmpiricalDistribution e(sorted);
  return {{"operation", "walk"},
          {"params", params_to_json(cfg.params)},
          {"nu", nu_to_json(cfg.nu)},
          {"steps", cfg.steps},
          {"replicas", cfg.replicas},
          {"compression_exponent", cfg.compression_exponent},
          {"seed", cfg.seed},
          {"mean", e.mean()},
          {"std_dev", e.std_dev()},
          {"min", sorted.front()},
          {"median", e.quantile(0.5)},
          {"max", sorted.back()}};
}

// ---------------------------------------------------------------- limits

struct LimitsOutcome {
  json summary;
  std::vector<std::vector<std::string>> rows;  ///< CSV body
  std::vector<std::string> header;
  bool pass = true;
};

inline json limit_report_to_json(const LimitReport& r) {
  json pts = json::array();
  for (const auto& p : r.residuals)
    pts.push_back({{"grid_value", p.grid_value}, {"residual", p.residual}, {"normalized", p.normalized}});
  return {{"name", r.name},
          {"grid", r.grid_description},
          {"residuals", pts},
          {"fitted_exponent", r.fitted_exponent},
          {"fit_quality", r.fit_quality},
          {"expected_exponent", r.expected_exponent},
          {"max_residual", r.max_residual()},
          {"max_normalized", r.max_normalized()}};
}

/// Run the limit certification described by the config. Optional
/// thresholds: slope_threshold (pass iff fitted exponent <= it) and
/// bound_threshold (pass iff max normalized residual <= it).
inline LimitsOutcome run_limits(const ExperimentFile& f, unsigned threads) {
  if (f.operation != "limits") throw ConfigError("experiment.operation must be 'limits' for this command");
  if (!f.experiment.contains("kind") || !f.experiment.at("kind").is_string())
    throw ConfigError("experiment.kind is required");
  const std::string kind = f.experiment.at("kind").get<std::string>();
  LimitsOutcome out;
  std::optional<LimitReport> report;
  std::optional<double> slope_threshold, bound_threshold;
  auto thresholds = [&](const Section& s) {
    if (s.has("slope_threshold")) slope_threshold = s.number("slope_threshold");
    if (s.has("bound_threshold")) bound_threshold = s.number("bound_threshold");
  };
  try {
    if (kind == "alpha_limit") {
      Section s(f.experiment, "experiment",
                {"operation", "kind", "beta", "lambda", "t_grid", "alpha_grid", "slope_threshold", "bound_threshold"});
      thresholds(s);
      report = prop_alpha_limit(s.number("beta"), s.number("lambda"), s.numbers("t_grid"), s.numbers("alpha_grid"),
                                threads);
    } else if (kind == "coupled_limit") {
      Section s(f.experiment, "experiment",
                {"operation", "kind", "c", "d_shift", "lambda", "t_grid", "beta_grid", "slope_threshold",
                 "bound_threshold"});
      thresholds(s);
      report = prop_coupled_limit(s.number("c"), s.number("d_shift"), s.number("lambda"), s.numbers("t_grid"),
                                  s.numbers("beta_grid"), threads);
    } else if (kind == "bessel_limit") {
      Section s(f.experiment, "experiment",
                {"operation", "kind", "lambda", "T", "n_grid", "t_points", "slope_threshold", "bound_threshold"});
      thresholds(s);
      report = prop_bessel_limit(f.require_params(), s.number("lambda"), s.number("T"), s.numbers("n_grid"),
                                 static_cast<int>(s.integer_or("t_points", 61)), threads);
    } else if (kind == "moment_phase" || kind == "exp_phase") {
      Section s(f.experiment, "experiment",
                {"operation", "kind", "lambda_grid", "t_grid", "slope_threshold", "bound_threshold"});
      thresholds(s);
      report = kind == "moment_phase"
                   ? prop_moment_phase(f.require_params(), s.numbers("lambda_grid"), s.numbers("t_grid"), {}, threads)
                   : cor_exp_phase(f.require_params(), s.numbers("lambda_grid"), s.numbers("t_grid"), threads);
    } else if (kind == "taylor") {
      Section s(f.experiment, "experiment",
                {"operation", "kind", "lambda", "t", "a", "r", "n_grid", "slope_threshold", "bound_threshold"});
      thresholds(s);
      report = taylor_residual(f.require_params(), s.number("lambda"), s.number("t"), s.number("a"), s.number("r"),
                               s.numbers("n_grid"), threads);
    } else if (kind == "m1_bounds") {
      Section s(f.experiment, "experiment", {"operation", "kind", "t_grid", "flat_lo", "flat_hi", "tolerance"});
      const auto b = m1_bounds(f.require_params(), s.numbers("t_grid"), s.number_or("flat_lo", 20.0),
                               s.number_or("flat_hi", 50.0), s.number_or("tolerance", 1e-9), {}, threads);
      out.header = {"t", "m1", "t_minus_m1"};
      for (const auto& [t, m] : b.values) out.rows.push_back({format_double(t), format_double(m), format_double(t - m)});
      out.pass = b.below_identity;
      out.summary = {{"name", "m1_bounds"},
                     {"max_gap", b.max_gap},
                     {"max_excess", b.max_excess},
                     {"below_identity", b.below_identity},
                     {"flat_variation", b.flat_variation},
                     {"pass", out.pass}};
      return out;
    } else {
      throw ConfigError("experiment.kind '" + kind + "' is not a known limit");
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  out.summary = limit_report_to_json(*report);
  out.header = {report->grid_description, "residual", "normalized"};
  for (const auto& p : report->residuals)
    out.rows.push_back({format_double(p.grid_value), format_double(p.residual), format_double(p.normalized)});
  json checks = json::array();
  if (slope_threshold) {
    const bool ok = report->fitted_exponent <= *slope_threshold;
    checks.push_back({{"name", "slope"}, {"value", report->fitted_exponent}, {"threshold", *slope_threshold}, {"pass", ok}});
    out.pass = out.pass && ok;
  }
  if (bound_threshold) {
    const bool ok = report->max_normalized() <= *bound_threshold;
    checks.push_back({{"name", "bound"}, {"value", report->max_normalized()}, {"threshold", *bound_threshold}, {"pass", ok}});
    out.pass = out.pass && ok;
  }
  out.summary["checks"] = checks;
  out.summary["pass"] = out.pass;
  return out;
}

// ---------------------------------------------------------------- clt

inline std::optional<Regime> parse_regime(const std::string& s) {
  if (s == "auto") return Regime::automatic;
  if (s == "case1") return Regime::case1;
  if (s == "case2") return Regime::case2;
  if (s == "case3") return Regime::case3;
  return std::nullopt;
}

inline PowerSchedule parse_schedule(const json& j) {
  Section s(j, "experiment.schedule", {"coefficient", "power"});
  return {s.number_or("coefficient", 1.0), s.number("power")};
}

/// Overrides a command line may apply on top of the file.
struct CltOverrides {
  std::optional<int> replicas;
  std::optional<std::uint64_t> seed;
  std::optional<Regime> regime;
};

struct CltOutcome {
  std::optional<CltReport> report;
  std::optional<TailReport> tail;
};

inline CltOutcome run_clt(const ExperimentFile& f, const CltOverrides& ov, unsigned threads) {
  if (f.operation != "clt") throw ConfigError("experiment.operation must be 'clt' for this command");
  Section s(f.experiment, "experiment",
            {"operation", "kind", "replicas", "n_grid", "compression_exponent", "regime", "ks_threshold",
             "slope_threshold", "bias_allowance", "beta", "c", "d_shift", "schedule", "c_grid", "keep_samples"});
  const std::string kind = s.string("kind");
  CltConfig cfg;
  cfg.replicas = ov.replicas ? *ov.replicas : static_cast<int>(s.integer("replicas"));
  cfg.seed = ov.seed ? *ov.seed : f.seed;
  cfg.n_grid = s.integers("n_grid");
  cfg.compression_exponent = s.number_or("compression_exponent", 0.0);
  cfg.threads = threads;
  cfg.keep_samples = s.boolean_or("keep_samples", !f.output.samples_csv.empty());
  cfg.nu = f.require_nu();
  CltThresholds th;
  if (kind == "growing_alpha" || kind == "growing_coupled") th.ks = 0.03;
  th.ks = s.number_or("ks_threshold", th.ks);
  th.slope = s.number_or("slope_threshold", th.slope);
  th.bias_allowance = s.number_or("bias_allowance", th.bias_allowance);
  CltOutcome out;
  if (kind == "growing_alpha") {
    out.report = clt_growing_alpha(s.number("beta"), parse_schedule(s.at("schedule")), cfg, th);
    return out;
  }
  if (kind == "growing_coupled") {
    out.report = clt_growing_coupled(s.number("c"), s.number("d_shift"), parse_schedule(s.at("schedule")), cfg, th);
    return out;
  }
  cfg.params = f.require_params();
  if (kind == "fixed_params") {
    out.report = clt_fixed_params(cfg, th);
  } else if (kind == "rayleigh") {
    out.report = clt_rayleigh(cfg, th);
  } else if (kind == "regimes") {
    Regime regime = Regime::automatic;
    if (s.has("regime")) {
      const auto r = parse_regime(s.string("regime"));
      if (!r) throw ConfigError("experiment.regime must be auto, case1, case2 or case3");
      regime = *r;
    }
    if (ov.regime) regime = *ov.regime;
    out.report = clt_regimes(cfg, regime, th);
  } else if (kind == "tail_bound") {
    out.tail = tail_bound_check(cfg, s.numbers("c_grid"));
  } else {
    throw ConfigError("experiment.kind '" + kind + "' is not a known CLT experiment");
  }
  return out;
}

inline json clt_report_to_json(const CltReport& r) {
  json pts = json::array();
  for (const auto& p : r.points)
    pts.push_back({{"n", p.n},
                   {"parameter", p.parameter},
                   {"ks", p.ks},
                   {"mean", p.mean},
                   {"std_dev", p.std_dev},
                   {"standard_error", p.standard_error},
                   {"median", p.median},
                   {"iqr", p.iqr}});
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}});
  json constants = json::object();
  for (const auto& [k, v] : r.constants) constants[k] = v;
  return {{"experiment", r.experiment},
          {"regime", r.regime},
          {"law", r.law},
          {"target_mean", r.target_mean},
          {"target_variance", r.target_variance},
          {"constants", constants},
          {"points", pts},
          {"ks_distance", r.ks_distance},
          {"mean_offset", r.mean_offset},
          {"rate_fit", {{"slope", r.rate_fit.slope}, {"r_squared", r.rate_fit.r_squared}, {"points", r.rate_fit.points}}},
          {"checks", checks},
          {"pass", r.pass}};
}

inline json tail_report_to_json(const TailReport& r) {
  json rows = json::array();
  for (const auto& x : r.rows)
    rows.push_back({{"n", x.n}, {"c", x.c}, {"tail", x.tail}, {"product", x.product}, {"slack", x.slack}});
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}});
  return {{"experiment", "tail_bound"},
          {"rows", rows},
          {"fitted_m", r.fitted_m},
          {"markov_m", r.markov_m},
          {"checks", checks},
          {"pass", r.pass}};
}

/// Structural check of a serialized CltReport; returns the list of problems.
inline std::vector<std::string> clt_report_schema_errors(const json& j) {
  std::vector<std::string> errs;
  auto need = [&](const json& obj, const char* key, auto pred, const char* type, const std::string& where) {
    if (!obj.contains(key)) errs.push_back(where + key + " missing");
    else if (!pred(obj.at(key))) errs.push_back(where + key + " is not " + type);
  };
  auto num = [](const json& v) { return v.is_number() || v.is_null(); };  // NaN serializes as null
  auto str = [](const json& v) { return v.is_string(); };
  if (!j.is_object()) return {"report is not an object"};
  need(j, "experiment", str, "a string", "");
  need(j, "regime", str, "a string", "");
  need(j, "law", str, "a string", "");
  need(j, "target_mean", num, "a number", "");
  need(j, "target_variance", num, "a number", "");
  need(j, "ks_distance", num, "a number", "");
  need(j, "mean_offset", num, "a number", "");
  need(j, "pass", [](const json& v) { return v.is_boolean(); }, "a boolean", "");
  need(j, "constants", [](const json& v) { return v.is_object(); }, "an object", "");
  need(j, "rate_fit", [](const json& v) { return v.is_object(); }, "an object", "");
  need(j, "points", [](const json& v) { return v.is_array() && !v.empty(); }, "a non-empty array", "");
  need(j, "checks", [](const json& v) { return v.is_array(); }, "an array", "");
  if (errs.empty()) {
    for (const auto& p : j.at("points")) {
      need(p, "n", [](const json& v) { return v.is_number_integer(); }, "an integer", "points[].");
      for (const char* k : {"parameter", "ks", "mean", "std_dev", "standard_error", "median", "iqr"})
        need(p, k, num, "a number", "points[].");
    }
    for (const auto& c : j.at("checks")) {
      need(c, "name", str, "a string", "checks[].");
      need(c, "pass", [](const json& v) { return v.is_boolean(); }, "a boolean", "checks[].");
    }
  }
  return errs;
}

// ---------------------------------------------------------------- writers

/// RFC 4180 style CSV with a header row; cells are written verbatim
/// (numeric cells come from format_double).
inline void write_csv(std::ostream& os, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      os << cells[i];
    }
    os << "\r\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
}

inline void write_column_csv(std::ostream& os, const std::string& name, const std::vector<double>& values) {
  os << "index," << name << "\r\n";
  for (std::size_t i = 0; i < values.size(); ++i) os << i << ',' << format_double(values[i]) << "\r\n";
}

inline std::vector<std::vector<std::string>> clt_points_rows(const CltReport& r) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& p : r.points)
    rows.push_back({std::to_string(p.n), format_double(p.parameter), format_double(p.ks), format_double(p.mean),
                    format_double(p.std_dev), format_double(p.median), format_double(p.iqr)});
  return rows;
}

inline const std::vector<std::string>& clt_points_header() {
  static const std::vector<std::string> h{"n", "parameter", "ks", "mean", "std_dev", "median", "iqr"};
  return h;
}

/// Write text to path, or to stdout when path is "-".
inline void write_text(const std::string& path, const std::string& text, std::ostream& stdout_stream) {
  if (path == "-") {
    stdout_stream << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file '" + path + "'");
  out << text;
}

}  // namespace jacobi::io
