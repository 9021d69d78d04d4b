#pragma once

// Monte Carlo harness for the central limit theorems of Jacobi random walks:
// normalizations, limit laws, KS distances, and rate fits.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jacobi/error.hpp"
#include "jacobi/hypergroup.hpp"
#include "jacobi/limits.hpp"
#include "jacobi/params.hpp"
#include "jacobi/stats.hpp"
#include "jacobi/walk.hpp"

namespace jacobi {

/// M_k = integral of m_k against nu.
inline double modified_moments(const JacobiParams& p, const StepDistribution& nu, int k,
                               const QuadratureSpec& quad = {}) {
  if (k < 1) throw DomainError("modified_moments: k must be >= 1");
  return expect(nu, [&](double x) { return moment_fn(p, k, x, quad); });
}

/// Common inputs of the Monte Carlo experiments.
struct CltConfig {
  JacobiParams params{1.0, 0.0};
  StepDistribution nu = StepDistribution::point_mass(1.0);
  double compression_exponent = 0.0;
  int replicas = 10000;
  std::uint64_t seed = 1;
  std::vector<int> n_grid{1000};
  unsigned threads = 0;
  QuadratureSpec quad{};
  bool keep_samples = false;

  void validate() const {
    if (replicas < 2) throw ConfigError("clt: replicas must be >= 2");
    if (n_grid.empty()) throw ConfigError("clt: n grid must not be empty");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
      if (n_grid[i] < 1) throw ConfigError("clt: n grid values must be >= 1");
      if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw ConfigError("clt: n grid must be strictly increasing");
    }
    if (nu.is_zero()) throw ConfigError("clt: the step law must not be delta_0");
  }
};

/// Summary of the normalized statistic at one horizon n.
struct CltPoint {
  int n = 0;
  double parameter = std::numeric_limits<double>::quiet_NaN();  ///< alpha_n or beta_n for growing schedules
  double ks = std::numeric_limits<double>::quiet_NaN();
  double mean = 0.0;
  double std_dev = 0.0;
  double standard_error = 0.0;
  double median = 0.0;
  double iqr = 0.0;
};

/// One named pass/fail criterion of a report.
struct CltCheck {
  std::string name;
  double value;
  double threshold;
  bool pass;
};

struct CltReport {
  std::string experiment;
  std::string regime;
  std::string law;
  double target_mean = 0.0;
  double target_variance = 0.0;
  std::map<std::string, double> constants;  ///< normalizing constants used
  std::vector<CltPoint> points;
  double ks_distance = std::numeric_limits<double>::quiet_NaN();  ///< at the largest n
  /// Sample mean minus target mean at the largest n; exposes the finite-n
  /// centering bias that the asymptotic statements ignore.
  double mean_offset = 0.0;
  LogLogFit rate_fit;
  std::vector<CltCheck> checks;
  bool pass = false;
  std::vector<double> samples;  ///< normalized statistic at the largest n, if requested

  void finalize() {
    pass = !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CltCheck& c) { return c.pass; });
  }
};

/// Pass thresholds; defaults follow the acceptance tolerances.
struct CltThresholds {
  double ks = 0.02;
  double slope = -0.30;
  double bias_allowance = 0.01;
  double standard_errors = 3.0;
};

namespace detail {

inline CltPoint summarize(int n, const EmpiricalDistribution& e, const LimitLaw* law) {
  CltPoint pt;
  pt.n = n;
  pt.ks = law ? ks_distance(e, *law) : std::numeric_limits<double>::quiet_NaN();
  pt.mean = e.mean();
  pt.std_dev = e.std_dev();
  pt.standard_error = e.standard_error();
  pt.median = e.quantile(0.5);
  pt.iqr = e.iqr();
  return pt;
}

inline WalkConfig walk_for(const CltConfig& cfg, int n, double r) {
  WalkConfig w;
  w.params = cfg.params;
  w.nu = cfg.nu;
  w.compression_exponent = r;
  w.steps = n;
  w.replicas = cfg.replicas;
  w.seed = cfg.seed;
  return w;
}

/// Walks at every n of the grid: a single run with checkpoints when r = 0,
/// otherwise one run per n with the step law compressed by n^{-r}.
inline std::vector<std::vector<double>> positions_on_grid(const CltConfig& cfg, double r) {
  std::vector<std::vector<double>> out;
  WalkOptions opt;
  opt.threads = cfg.threads;
  if (r == 0.0) {
    opt.checkpoints = cfg.n_grid;
    auto res = simulate_walk(walk_for(cfg, cfg.n_grid.back(), 0.0), opt);
    return std::move(res.checkpoint_positions);
  }
  for (std::size_t k = 0; k < cfg.n_grid.size(); ++k) {
    WalkConfig w = walk_for(cfg, cfg.n_grid[k], r);
    w.seed = splitmix64(cfg.seed + k);
    out.push_back(simulate_walk(w, opt).finals);
  }
  return out;
}

inline void add_ks_and_rate(CltReport& rep, const CltThresholds& th, bool with_rate) {
  rep.ks_distance = rep.points.back().ks;
  rep.checks.push_back({"ks_at_largest_n", rep.ks_distance, th.ks, rep.ks_distance <= th.ks});
  if (with_rate && rep.points.size() >= 3) {
    std::vector<double> x, y;
    for (const auto& p : rep.points) {
      x.push_back(p.n);
      y.push_back(p.ks);
    }
    rep.rate_fit = fit_loglog(x, y);
    rep.checks.push_back({"ks_rate_slope", rep.rate_fit.slope, th.slope, rep.rate_fit.slope <= th.slope});
  }
}

}  // namespace detail

/// Fixed parameters, uncompressed steps: (S_n - n M_1)/sqrt(n) -> N(0, M_2 - M_1^2),
/// with the Berry-Esseen rate surrogate fitted across the n grid.
inline CltReport clt_fixed_params(const CltConfig& cfg, const CltThresholds& th = {}) {
  cfg.validate();
  if (cfg.compression_exponent != 0.0) throw ConfigError("fixed-parameter CLT requires r = 0");
  const double M1 = modified_moments(cfg.params, cfg.nu, 1, cfg.quad);
  const double M2 = modified_moments(cfg.params, cfg.nu, 2, cfg.quad);
  const double var = M2 - M1 * M1;
  if (!(var > 1e-12)) throw ConfigError("fixed-parameter CLT: M2 - M1^2 is numerically zero");
  CltReport rep;
  rep.experiment = "fixed_params";
  const auto law = LimitLaw::normal(0.0, var);
  rep.law = law.describe();
  rep.target_mean = 0.0;
  rep.target_variance = var;
  rep.constants = {{"M1", M1}, {"M2", M2}};
  const auto positions = detail::positions_on_grid(cfg, 0.0);
  for (std::size_t k = 0; k < cfg.n_grid.size(); ++k) {
    const double n = cfg.n_grid[k];
    std::vector<double> z(positions[k].size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = (positions[k][i] - n * M1) / std::sqrt(n);
    EmpiricalDistribution e(std::move(z));
    rep.points.push_back(detail::summarize(cfg.n_grid[k], e, &law));
    if (k + 1 == cfg.n_grid.size() && cfg.keep_samples) rep.samples = e.samples();
  }
  rep.mean_offset = rep.points.back().mean - rep.target_mean;
  detail::add_ks_and_rate(rep, th, true);
  rep.finalize();
  return rep;
}

/// r > 1/2: sqrt(2(alpha+1)/m_2) n^{r-1/2} S_n -> Rayleigh(alpha), m_2 = integral of x^2 dnu.
inline CltReport clt_rayleigh(const CltConfig& cfg, const CltThresholds& th = {}) {
  cfg.validate();
  const double r = cfg.compression_exponent;
  if (!(r > 0.5)) throw ConfigError("Rayleigh CLT requires r > 1/2");
  const double m2 = raw_moment(cfg.nu, 2);
  if (!(m2 > 0.0) || !std::isfinite(m2)) throw ConfigError("Rayleigh CLT requires 0 < m_2 < inf");
  const double alpha = cfg.params.alpha();
  CltReport rep;
  rep.experiment = "rayleigh";
  const auto law = LimitLaw::rayleigh(alpha);
  rep.law = law.describe();
  rep.target_mean = law.mean();
  rep.target_variance = law.variance();
  rep.constants = {{"m2", m2}, {"r", r}};
  const auto positions = detail::positions_on_grid(cfg, r);
  for (std::size_t k = 0; k < cfg.n_grid.size(); ++k) {
    const double n = cfg.n_grid[k];
    const double scale = std::sqrt(2.0 * (alpha + 1.0) / m2) * std::pow(n, r - 0.5);
    std::vector<double> z(positions[k].size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = scale * positions[k][i];
    EmpiricalDistribution e(std::move(z));
    rep.points.push_back(detail::summarize(cfg.n_grid[k], e, &law));
    if (k + 1 == cfg.n_grid.size() && cfg.keep_samples) rep.samples = e.samples();
  }
  rep.mean_offset = rep.points.back().mean - rep.target_mean;
  detail::add_ks_and_rate(rep, th, false);
  rep.finalize();
  return rep;
}

enum class Regime { automatic, case1, case2, case3 };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::automatic: return "auto";
    case Regime::case1: return "case1";
    case Regime::case2: return "case2";
    case Regime::case3: return "case3";
  }
  return "?";
}

inline constexpr double kRegimeTolerance = 1e-12;

/// Case split at r = 1/6 for r in (0, 1/2).
inline Regime select_regime(double r) {
  if (!(r > 0.0 && r < 0.5)) throw ConfigError("regime selection requires r in (0, 1/2)");
  if (std::abs(r - 1.0 / 6.0) <= kRegimeTolerance) return Regime::case2;
  return r > 1.0 / 6.0 ? Regime::case1 : Regime::case3;
}

/// -rho (alpha + 3 beta + 2) m_4 / (12 (alpha+1)(alpha+2)), the drift of cases 2 and 3.
inline double regime_drift(const JacobiParams& p, double m4) {
  const double a = p.alpha(), b = p.beta();
  return -p.rho() * (a + 3.0 * b + 2.0) * m4 / (12.0 * (a + 1.0) * (a + 2.0));
}

/// Normalized statistic (S - rho m_2 n^{1-2r} / (2(alpha+1))) / D_n, where
/// D_n = n^{1/2-r} in cases 1 and 2 and n^{1-4r} in case 3.
inline double regime_statistic(const JacobiParams& p, double m2, double r, double n, double s, Regime regime) {
  const double center = p.rho() * m2 * std::pow(n, 1.0 - 2.0 * r) / (2.0 * (p.alpha() + 1.0));
  const double denom = regime == Regime::case3 ? std::pow(n, 1.0 - 4.0 * r) : std::pow(n, 0.5 - r);
  return (s - center) / denom;
}

/// r in (0, 1/2): the three regimes around r = 1/6.
inline CltReport clt_regimes(const CltConfig& cfg, Regime regime = Regime::automatic,
                             const CltThresholds& th = {}) {
  cfg.validate();
  const double r = cfg.compression_exponent;
  const Regime chosen = regime == Regime::automatic ? select_regime(r) : regime;
  if (!(r > 0.0 && r < 0.5)) throw ConfigError("regime CLT requires r in (0, 1/2)");
  if (chosen != select_regime(r)) throw ConfigError("regime does not match the compression exponent");
  const JacobiParams& p = cfg.params;
  const double m2 = raw_moment(cfg.nu, 2);
  const double m4 = raw_moment(cfg.nu, 4);
  const double drift = regime_drift(p, m4);
  const double var = m2 / (2.0 * (p.alpha() + 1.0));
  CltReport rep;
  rep.experiment = "regimes";
  rep.regime = to_string(chosen);
  rep.constants = {{"m2", m2}, {"m4", m4}, {"drift", drift}, {"r", r}};
  std::optional<LimitLaw> law;
  switch (chosen) {
    case Regime::case1: law = LimitLaw::normal(0.0, var); break;
    case Regime::case2: law = LimitLaw::normal(drift, var); break;
    default: law = LimitLaw::constant(drift); break;
  }
  rep.law = law->describe();
  rep.target_mean = law->mean();
  rep.target_variance = law->variance();
  const auto positions = detail::positions_on_grid(cfg, r);
  for (std::size_t k = 0; k < cfg.n_grid.size(); ++k) {
    const double n = cfg.n_grid[k];
    std::vector<double> z(positions[k].size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = regime_statistic(p, m2, r, n, positions[k][i], chosen);
    EmpiricalDistribution e(std::move(z));
    rep.points.push_back(detail::summarize(cfg.n_grid[k], e, chosen == Regime::case3 ? nullptr : &*law));
    if (k + 1 == cfg.n_grid.size() && cfg.keep_samples) rep.samples = e.samples();
  }
  const auto& last = rep.points.back();
  rep.ks_distance = last.ks;
  rep.mean_offset = last.mean - rep.target_mean;
  const double mean_tol = th.standard_errors * last.standard_error + th.bias_allowance;
  switch (chosen) {
    case Regime::case1:
      rep.checks.push_back({"ks_at_largest_n", last.ks, th.ks, last.ks <= th.ks});
      break;
    case Regime::case2:
      rep.checks.push_back({"mean_vs_drift", std::abs(rep.mean_offset), mean_tol, std::abs(rep.mean_offset) <= mean_tol});
      break;
    default: {
      rep.checks.push_back({"mean_vs_drift", std::abs(rep.mean_offset), mean_tol, std::abs(rep.mean_offset) <= mean_tol});
      bool shrinking = true;
      for (std::size_t k = 1; k < rep.points.size(); ++k)
        shrinking = shrinking && rep.points[k].iqr < rep.points[k - 1].iqr;
      rep.checks.push_back({"iqr_decreasing", rep.points.back().iqr, rep.points.front().iqr, shrinking});
      rep.checks.push_back({"drift_negative", drift, 0.0, drift < 0.0});
      break;
    }
  }
  rep.finalize();
  return rep;
}

/// Parameter schedule x_n = coefficient * n^power.
struct PowerSchedule {
  double coefficient = 1.0;
  double power = 2.0;
  double at(int n) const { return coefficient * std::pow(static_cast<double>(n), power); }
};

namespace detail {

template <class ParamsAt>
CltReport growing_clt(const char* name, const CltConfig& cfg, ParamsAt&& params_at,
                      const std::function<double(double)>& phase, const CltThresholds& th) {
  cfg.validate();
  if (cfg.compression_exponent != 0.0) throw ConfigError("growing-parameter CLT requires r = 0");
  const double m1 = expect(cfg.nu, phase);
  const double m2 = expect(cfg.nu, [&](double x) { return phase(x) * phase(x); });
  const double var = m2 - m1 * m1;
  if (!(var > 1e-12)) throw ConfigError(std::string(name) + ": m2 - m1^2 is numerically zero (nu is a point mass?)");
  CltReport rep;
  rep.experiment = name;
  const auto law = LimitLaw::normal(0.0, var);
  rep.law = law.describe();
  rep.target_variance = var;
  rep.constants = {{"m1", m1}, {"m2", m2}};
  for (std::size_t k = 0; k < cfg.n_grid.size(); ++k) {
    const int n = cfg.n_grid[k];
    CltConfig local = cfg;
    local.params = params_at(n);
    WalkConfig w = walk_for(local, n, 0.0);
    w.seed = splitmix64(cfg.seed + k);
    WalkOptions opt;
    opt.threads = cfg.threads;
    const auto finals = simulate_walk(w, opt).finals;
    std::vector<double> z(finals.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = (finals[i] - n * m1) / std::sqrt(static_cast<double>(n));
    EmpiricalDistribution e(std::move(z));
    auto pt = summarize(n, e, &law);
    pt.parameter = local.params.alpha();
    rep.points.push_back(pt);
    if (k + 1 == cfg.n_grid.size() && cfg.keep_samples) rep.samples = e.samples();
  }
  rep.mean_offset = rep.points.back().mean;
  add_ks_and_rate(rep, th, false);
  rep.finalize();
  return rep;
}

}  // namespace detail

/// alpha_n = schedule(n) with n / alpha_n -> 0: (S_n - n m_1)/sqrt(n) -> N(0, m_2 - m_1^2),
/// m_j = integral of (ln ch x)^j dnu.
inline CltReport clt_growing_alpha(double beta, const PowerSchedule& alpha_schedule, const CltConfig& cfg,
                                   const CltThresholds& th = {0.03, -0.30, 0.01, 3.0}) {
  if (!(alpha_schedule.power > 1.0))
    throw ConfigError("growing-alpha CLT requires n / alpha_n -> 0 (power > 1)");
  return detail::growing_clt(
      "growing_alpha", cfg, [&](int n) { return JacobiParams(alpha_schedule.at(n), beta); },
      [](double x) { return log_cosh(x); }, th);
}

/// alpha_n = c beta_n + d_shift with beta_n = schedule(n): the same normal
/// limit with m_j = integral of coupled_phase(c, x)^j dnu.
inline CltReport clt_growing_coupled(double c, double d_shift, const PowerSchedule& beta_schedule,
                                     const CltConfig& cfg, const CltThresholds& th = {0.03, -0.30, 0.01, 3.0}) {
  if (!(c > 1.0) || !(d_shift > 0.0)) throw ConfigError("coupled CLT requires c > 1 and d_shift > 0");
  if (!(beta_schedule.power > 1.0))
    throw ConfigError("coupled CLT requires n / beta_n -> 0 (power > 1)");
  auto report = detail::growing_clt(
      "growing_coupled", cfg,
      [&](int n) {
        const double b = beta_schedule.at(n);
        return JacobiParams(c * b + d_shift, b);
      },
      [c](double x) { return coupled_phase(c, x); }, th);
  report.constants["c"] = c;
  report.constants["d_shift"] = d_shift;
  return report;
}

struct TailRow {
  int n;
  double c;
  double tail;     ///< empirical P(S_n >= c)
  double product;  ///< tail * m_1(c) * n^{2r-1}
  double slack;    ///< three binomial standard errors in product units
};

struct TailReport {
  std::vector<TailRow> rows;
  double fitted_m = 0.0;  ///< largest product over the grid
  /// Markov bound n^{2r} M_1(nu_{n^{-r}}) maximized over the n grid; it
  /// follows from additivity of M_1 and monotonicity of m_1.
  double markov_m = 0.0;
  std::vector<CltCheck> checks;
  bool pass = false;
};

/// Empirical P(S_n >= c) m_1(c) n^{2r-1} over a (c, n) grid for r > 1/2.
inline TailReport tail_bound_check(const CltConfig& cfg, const std::vector<double>& c_grid) {
  cfg.validate();
  const double r = cfg.compression_exponent;
  if (!(r > 0.5)) throw ConfigError("tail bound check requires r > 1/2");
  detail::require_grid(c_grid, "c grid");
  if (c_grid.front() <= 0.0) throw ConfigError("tail bound check requires c > 0");
  std::vector<double> m1c(c_grid.size());
  for (std::size_t j = 0; j < c_grid.size(); ++j) m1c[j] = moment_fn(cfg.params, 1, c_grid[j], cfg.quad);

  TailReport rep;
  const auto positions = detail::positions_on_grid(cfg, r);
  bool monotone = true, bounded = true;
  for (std::size_t k = 0; k < cfg.n_grid.size(); ++k) {
    const double n = cfg.n_grid[k];
    const auto compressed = compress(cfg.nu, std::pow(n, -r));
    const double M1 = expect(compressed, [&](double x) { return moment_fn(cfg.params, 1, x, cfg.quad); });
    const double bound_n = std::pow(n, 2.0 * r) * M1;
    rep.markov_m = std::max(rep.markov_m, bound_n);
    EmpiricalDistribution e(positions[k]);
    double prev = 1.0;
    for (std::size_t j = 0; j < c_grid.size(); ++j) {
      const double tail = 1.0 - e.cdf_left(c_grid[j]);
      const double factor = m1c[j] * std::pow(n, 2.0 * r - 1.0);
      const double slack = 3.0 * std::sqrt(std::max(tail * (1.0 - tail), 1.0 / cfg.replicas) / cfg.replicas) * factor;
      rep.rows.push_back({cfg.n_grid[k], c_grid[j], tail, tail * factor, slack});
      rep.fitted_m = std::max(rep.fitted_m, tail * factor);
      if (tail > prev) monotone = false;
      prev = tail;
      if (tail * factor > bound_n + slack) bounded = false;
    }
  }
  rep.checks.push_back({"tail_monotone_in_c", 0.0, 0.0, monotone});
  rep.checks.push_back({"products_below_markov_bound", rep.fitted_m, rep.markov_m, bounded});
  rep.checks.push_back({"fitted_m_finite", rep.fitted_m, std::numeric_limits<double>::infinity(),
                        std::isfinite(rep.fitted_m)});
  rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const CltCheck& c) { return c.pass; });
  return rep;
}

}  // namespace jacobi
