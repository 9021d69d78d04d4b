#pragma once

// Numerical certification of the limit results for Jacobi functions:
// residuals against the limiting expressions over parameter grids, and the
// decay exponents fitted to them.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "jacobi/error.hpp"
#include "jacobi/hypergroup.hpp"
#include "jacobi/jacobi_function.hpp"
#include "jacobi/params.hpp"
#include "jacobi/specfun.hpp"
#include "jacobi/stats.hpp"
#include "jacobi/walk.hpp"

namespace jacobi {

struct ResidualPoint {
  double grid_value;
  double residual;
  /// Residual divided by the shape of its proven bound (NaN when the shape
  /// vanishes); bounded values certify the existence of the constant.
  double normalized;
};

struct LimitReport {
  std::string name;
  std::string grid_description;
  std::vector<ResidualPoint> residuals;
  double fitted_exponent = std::numeric_limits<double>::quiet_NaN();
  double fit_quality = std::numeric_limits<double>::quiet_NaN();
  /// Exponent the theory predicts, when it does (NaN otherwise).
  double expected_exponent = std::numeric_limits<double>::quiet_NaN();

  double max_residual() const {
    double m = 0.0;
    for (const auto& r : residuals) m = std::max(m, r.residual);
    return m;
  }
  double max_normalized() const {
    double m = 0.0;
    for (const auto& r : residuals)
      if (std::isfinite(r.normalized)) m = std::max(m, r.normalized);
    return m;
  }
};

namespace detail {

inline void require_grid(const std::vector<double>& g, const char* what, bool increasing = true) {
  if (g.empty()) throw DomainError(std::string(what) + " must not be empty");
  for (double x : g)
    if (!std::isfinite(x)) throw DomainError(std::string(what) + " contains a non-finite value");
  if (increasing)
    for (std::size_t i = 1; i < g.size(); ++i)
      if (!(g[i] > g[i - 1])) throw DomainError(std::string(what) + " must be strictly increasing");
}

inline void require_t_grid(const std::vector<double>& t_grid) {
  require_grid(t_grid, "t grid", false);
  for (double t : t_grid)
    if (t < 0.0) throw DomainError("t grid values must be >= 0");
}

inline void finish_fit(LimitReport& rep) {
  std::vector<double> x, y;
  for (const auto& r : rep.residuals) {
    x.push_back(r.grid_value);
    y.push_back(r.residual);
  }
  const auto fit = fit_loglog(x, y);
  rep.fitted_exponent = fit.slope;
  rep.fit_quality = fit.r_squared;
}

inline double safe_ratio(double num, double den) {
  return den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
}

/// phi_{i rho - lambda}(t), the characteristic-function line.
inline Complex phi_shifted(const JacobiParams& p, double lambda, double t) {
  return jacobi_phi_series(p, shifted_spectral(p, lambda), t);
}

}  // namespace detail

/// Large-alpha limit: residual(alpha) = sup_t |phi_{i rho - lambda}^{(alpha,beta)}(t) - e^{i lambda ln ch t}|.
/// The bound has the shape |lambda| min(1,t) alpha^{-1/2}.
inline LimitReport prop_alpha_limit(double beta, double lambda, const std::vector<double>& t_grid,
                                    const std::vector<double>& alpha_grid, unsigned threads = 0) {
  detail::require_t_grid(t_grid);
  detail::require_grid(alpha_grid, "alpha grid");
  if (alpha_grid.front() <= std::max(beta, 0.0))
    throw DomainError("alpha grid values must exceed max(beta, 0)");
  LimitReport rep;
  rep.name = "alpha_limit";
  rep.grid_description = "alpha";
  rep.expected_exponent = -0.5;
  rep.residuals.resize(alpha_grid.size());
  const double tmax = *std::max_element(t_grid.begin(), t_grid.end());
  detail::parallel_for(alpha_grid.size(), resolve_threads(threads), [&](std::size_t i) {
    const JacobiParams p(alpha_grid[i], beta);
    const Complex I{0.0, 1.0};
    double sup = 0.0;
    for (double t : t_grid)
      sup = std::max(sup, std::abs(detail::phi_shifted(p, lambda, t) - std::exp(I * lambda * log_cosh(t))));
    const double shape = std::abs(lambda) * std::min(1.0, tmax) / std::sqrt(alpha_grid[i]);
    rep.residuals[i] = {alpha_grid[i], sup, detail::safe_ratio(sup, shape)};
  });
  detail::finish_fit(rep);
  return rep;
}

/// ln |ch t + i sh t / sqrt(c)| = ln sqrt(ch^2 t + sh^2 t / c), the phase of
/// the coupled limit. As beta grows, r^2 concentrates at 1/c and cos phi at 0,
/// so the Laplace integrand tends to |ch t + i sh t / sqrt(c)|^{i lambda - rho}.
inline double coupled_phase(double c, double t) {
  // ch^2 t + sh^2 t / c = ch^2 t (1 + th^2 t / c)
  const double th = std::tanh(t);
  return log_cosh(t) + 0.5 * std::log1p(th * th / c);
}

/// Coupled limit alpha = c beta + d_shift, beta -> infinity:
/// residual(beta) = sup_t |phi_{i rho - lambda}(t) - e^{i lambda coupled_phase(c, t)}|.
inline LimitReport prop_coupled_limit(double c, double d_shift, double lambda,
                                      const std::vector<double>& t_grid,
                                      const std::vector<double>& beta_grid, unsigned threads = 0) {
  if (!(c > 1.0)) throw DomainError("coupled limit requires c > 1");
  if (!(d_shift > 0.0)) throw DomainError("coupled limit requires d_shift > 0");
  detail::require_t_grid(t_grid);
  detail::require_grid(beta_grid, "beta grid");
  if (beta_grid.front() <= 0.0) throw DomainError("beta grid values must be > 0");
  LimitReport rep;
  rep.name = "coupled_limit";
  rep.grid_description = "beta";
  rep.expected_exponent = -0.5;
  rep.residuals.resize(beta_grid.size());
  const double tmax = *std::max_element(t_grid.begin(), t_grid.end());
  detail::parallel_for(beta_grid.size(), resolve_threads(threads), [&](std::size_t i) {
    const double b = beta_grid[i];
    const JacobiParams p(c * b + d_shift, b);
    const Complex I{0.0, 1.0};
    double sup = 0.0;
    for (double t : t_grid)
      sup = std::max(sup, std::abs(detail::phi_shifted(p, lambda, t) - std::exp(I * lambda * coupled_phase(c, t))));
    const double shape = std::abs(lambda) * std::min(1.0, tmax) / std::sqrt(b);
    rep.residuals[i] = {b, sup, detail::safe_ratio(sup, shape)};
  });
  detail::finish_fit(rep);
  return rep;
}

/// Flat (Bessel) limit: residual(n) = sup_{t in [0,T]} |phi_{i rho - n lambda}(t/n) - j_alpha(lambda t)|,
/// normalized by |lambda| T^2 / n.
inline LimitReport prop_bessel_limit(const JacobiParams& p, double lambda, double T,
                                     const std::vector<double>& n_grid, int t_points = 61,
                                     unsigned threads = 0) {
  if (!(T >= 0.0)) throw DomainError("bessel limit requires T >= 0");
  if (t_points < 2) throw DomainError("bessel limit requires at least two t points");
  detail::require_grid(n_grid, "n grid");
  if (n_grid.front() < 1.0) throw DomainError("n grid values must be >= 1");
  LimitReport rep;
  rep.name = "bessel_limit";
  rep.grid_description = "n";
  rep.expected_exponent = -1.0;
  rep.residuals.resize(n_grid.size());
  detail::parallel_for(n_grid.size(), resolve_threads(threads), [&](std::size_t i) {
    const double n = n_grid[i];
    double sup = 0.0;
    for (int k = 0; k < t_points; ++k) {
      const double t = T * k / (t_points - 1);
      const double lhs_target = bessel_j(p.alpha(), std::abs(lambda) * t);
      sup = std::max(sup, std::abs(detail::phi_shifted(p, n * lambda, t / n) - lhs_target));
    }
    rep.residuals[i] = {n, sup, detail::safe_ratio(sup * n, std::abs(lambda) * T * T)};
  });
  detail::finish_fit(rep);
  return rep;
}

/// The admissible constant 6 alpha / (e (alpha - beta - 1)) for alpha > beta + 1.
inline double moment_phase_constant(const JacobiParams& p) {
  if (!(p.alpha() > p.beta() + 1.0))
    throw DomainError("the explicit moment-phase constant needs alpha > beta + 1");
  return 6.0 * p.alpha() / (std::numbers::e * (p.alpha() - p.beta() - 1.0));
}

namespace detail {

template <class Phase>
LimitReport phase_report(const char* name, const JacobiParams& p, const std::vector<double>& lambda_grid,
                         const std::vector<double>& t_grid, Phase&& phase, unsigned threads) {
  detail::require_grid(lambda_grid, "lambda grid", false);
  detail::require_t_grid(t_grid);
  std::vector<double> phases(t_grid.size());
  detail::parallel_for(t_grid.size(), resolve_threads(threads), [&](std::size_t k) { phases[k] = phase(t_grid[k]); });
  LimitReport rep;
  rep.name = name;
  rep.grid_description = "lambda";
  rep.residuals.resize(lambda_grid.size());
  detail::parallel_for(lambda_grid.size(), resolve_threads(threads), [&](std::size_t i) {
    const double lam = lambda_grid[i];
    const Complex I{0.0, 1.0};
    double sup = 0.0;
    for (std::size_t k = 0; k < t_grid.size(); ++k)
      sup = std::max(sup, std::abs(phi_shifted(p, lam, t_grid[k]) - std::exp(I * lam * phases[k])));
    const double a = std::abs(lam);
    rep.residuals[i] = {lam, sup, safe_ratio(sup, a * a + a * a * a)};
  });
  // Fitted against |lambda|: small-lambda behaviour is quadratic.
  std::vector<double> x, y;
  for (const auto& r : rep.residuals) {
    x.push_back(std::abs(r.grid_value));
    y.push_back(r.residual);
  }
  const auto fit = fit_loglog(x, y);
  rep.fitted_exponent = fit.slope;
  rep.fit_quality = fit.r_squared;
  return rep;
}

}  // namespace detail

/// residual(lambda) = sup_t |phi_{i rho - lambda}(t) - e^{i lambda m_1(t)}|, normalized by lambda^2 + |lambda|^3.
inline LimitReport prop_moment_phase(const JacobiParams& p, const std::vector<double>& lambda_grid,
                                     const std::vector<double>& t_grid, const QuadratureSpec& quad = {},
                                     unsigned threads = 0) {
  return detail::phase_report("moment_phase", p, lambda_grid, t_grid,
                              [&](double t) { return moment_fn(p, 1, t, quad); }, threads);
}

/// residual(lambda) = sup_t |phi_{i rho - lambda}(t) - e^{i lambda t}|, normalized by lambda^2 + |lambda|^3.
inline LimitReport cor_exp_phase(const JacobiParams& p, const std::vector<double>& lambda_grid,
                                 const std::vector<double>& t_grid, unsigned threads = 0) {
  return detail::phase_report("exp_phase", p, lambda_grid, t_grid, [](double t) { return t; }, threads);
}

struct M1Bounds {
  double max_gap = 0.0;        ///< sup over the grid of t - m_1(t)
  double max_excess = 0.0;     ///< sup over the grid of m_1(t) - t (<= 0 up to rounding)
  bool below_identity = true;  ///< m_1(t) <= t + tolerance everywhere
  double flat_variation = 0.0; ///< max - min of t - m_1(t) on the flat window
  std::vector<std::pair<double, double>> values;  ///< (t, m_1(t))
};

/// Evaluate m_1 on t_grid and check t - C <= m_1(t) <= t, reporting the
/// variation of t - m_1(t) on [flat_lo, flat_hi].
inline M1Bounds m1_bounds(const JacobiParams& p, const std::vector<double>& t_grid, double flat_lo = 20.0,
                          double flat_hi = 50.0, double tolerance = 1e-9, const QuadratureSpec& quad = {},
                          unsigned threads = 0) {
  detail::require_t_grid(t_grid);
  M1Bounds out;
  out.values.resize(t_grid.size());
  detail::parallel_for(t_grid.size(), resolve_threads(threads), [&](std::size_t k) {
    out.values[k] = {t_grid[k], moment_fn(p, 1, t_grid[k], quad)};
  });
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  out.max_excess = -std::numeric_limits<double>::infinity();
  for (const auto& [t, m] : out.values) {
    out.max_gap = std::max(out.max_gap, t - m);
    out.max_excess = std::max(out.max_excess, m - t);
    if (m > t + tolerance) out.below_identity = false;
    if (t >= flat_lo && t <= flat_hi) {
      lo = std::min(lo, t - m);
      hi = std::max(hi, t - m);
    }
  }
  out.flat_variation = hi >= lo ? hi - lo : 0.0;
  return out;
}

/// Four-term expansion of phi_{i rho - lambda/n^a}(t/n^r):
/// 1 + i rho lambda t^2 / (2(alpha+1) n^{a+2r}) - lambda^2 t^2 / (4(alpha+1) n^{2a+2r})
///   - i rho (alpha+3beta+2) t^4 lambda / (12 (alpha+1)(alpha+2) n^{a+4r}).
inline Complex taylor_expansion(const JacobiParams& p, double lambda, double t, double a, double r, double n) {
  const double al = p.alpha(), be = p.beta(), rho = p.rho();
  const Complex I{0.0, 1.0};
  const double t2 = t * t;
  return 1.0 + I * rho * lambda * t2 / (2.0 * (al + 1.0) * std::pow(n, a + 2.0 * r)) -
         lambda * lambda * t2 / (4.0 * (al + 1.0) * std::pow(n, 2.0 * a + 2.0 * r)) -
         I * rho * (al + 3.0 * be + 2.0) * t2 * t2 * lambda /
             (12.0 * (al + 1.0) * (al + 2.0) * std::pow(n, a + 4.0 * r));
}

/// residual(n) = |phi_{i rho - lambda/n^a}(t/n^r) - taylor_expansion|; the
/// remainder is O(n^{-a-6r}) + O(n^{-2a-4r}).
inline LimitReport taylor_residual(const JacobiParams& p, double lambda, double t, double a, double r,
                                   const std::vector<double>& n_grid, unsigned threads = 0) {
  if (!(a >= 0.0) || !(r >= 0.0)) throw DomainError("taylor residual requires a, r >= 0");
  if (!(t >= 0.0)) throw DomainError("taylor residual requires t >= 0");
  detail::require_grid(n_grid, "n grid");
  if (n_grid.front() < 1.0) throw DomainError("n grid values must be >= 1");
  LimitReport rep;
  rep.name = "taylor_residual";
  rep.grid_description = "n";
  rep.expected_exponent = -std::min(a + 6.0 * r, 2.0 * a + 4.0 * r);
  rep.residuals.resize(n_grid.size());
  detail::parallel_for(n_grid.size(), resolve_threads(threads), [&](std::size_t i) {
    const double n = n_grid[i];
    const Complex exact = detail::phi_shifted(p, lambda / std::pow(n, a), t / std::pow(n, r));
    const double res = std::abs(exact - taylor_expansion(p, lambda, t, a, r, n));
    rep.residuals[i] = {n, res, detail::safe_ratio(res, std::pow(n, rep.expected_exponent))};
  });
  detail::finish_fit(rep);
  return rep;
}

}  // namespace jacobi
