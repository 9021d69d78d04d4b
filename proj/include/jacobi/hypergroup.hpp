#pragma once

// Point convolution delta_s * delta_t of the Jacobi hypergroup and the
// moment functions m_k.

#include <cmath>
#include <complex>
#include <type_traits>

#include "jacobi/error.hpp"
#include "jacobi/jacobi_function.hpp"
#include "jacobi/measure.hpp"
#include "jacobi/params.hpp"
#include "jacobi/random.hpp"

namespace jacobi {

namespace detail {

/// Below this scale ch and sh are evaluated directly; above, in log space.
inline constexpr double kDirectScale = 20.0;

/// arcosh |ch s ch t + r e^{i phi} sh s sh t| given rc = r cos phi and r^2.
///
/// For moderate s, t the square of the sine of the result is formed without
/// the 1 that arcosh would subtract; for large arguments the log-modulus is
/// accumulated instead so positions of any size stay finite.
inline double convolved_distance(double s, double t, double rc, double r2) {
  if (s == 0.0) return t;
  if (t == 0.0) return s;
  if (s <= kDirectScale && t <= kDirectScale) {
    const double shs = std::sinh(s), sht = std::sinh(t);
    const double chs = std::cosh(s), cht = std::cosh(t);
    const double shs2 = shs * shs, sht2 = sht * sht;
    const double sh2 = shs2 + sht2 + shs2 * sht2 * (1.0 + r2) + 2.0 * rc * chs * cht * shs * sht;
    return std::asinh(std::sqrt(std::max(0.0, sh2)));
  }
  const double tau = std::tanh(s) * std::tanh(t);
  const double rs2 = std::max(0.0, r2 - rc * rc);
  const double log_mod = log_cosh(s) + log_cosh(t) + log_modulus_unit(rc, std::sqrt(rs2), tau);
  const double L = std::max(0.0, log_mod);
  return L + std::log1p(std::sqrt(-std::expm1(-2.0 * L)));
}

}  // namespace detail

/// Integral of f against delta_s * delta_t, i.e. of
/// f(arcosh |ch s ch t + r e^{i phi} sh s sh t|) against m_{alpha,beta}.
template <class F>
auto convolve_point_expect(const JacobiParams& p, double s, double t, F&& f,
                           const QuadratureSpec& quad = {}) {
  detail::check_distance(s, "convolve_point_expect");
  detail::check_distance(t, "convolve_point_expect");
  using R = std::decay_t<decltype(f(0.0))>;
  if (s == 0.0) return R(f(t));
  if (t == 0.0) return R(f(s));
  const double gap = 1.0 - std::tanh(s) * std::tanh(t);
  const auto grid = make_measure_grid(p, quad, gap);
  return integrate_grid(grid, [&](const MeasureNode& n) {
    return R(f(detail::convolved_distance(s, t, n.r * n.cos_phi, n.r * n.r)));
  });
}

/// One draw from delta_s * delta_t.
inline double convolve_sample(const JacobiParams& p, double s, double t, RandomSource& rng) {
  if (s == 0.0) return t;
  if (t == 0.0) return s;
  const auto rc = detail::draw_radial_cos(p, rng);
  return detail::convolved_distance(s, t, rc.r * rc.cos_phi, rc.r * rc.r);
}

/// Value of a moment function together with its doubling residual.
struct MomentValue {
  double value;
  double residual;
};

/// m_k(t) = integral of (ln |ch t + r e^{i phi} sh t|)^k dm_{alpha,beta}, with the
/// difference between the given rule and its doubling as residual estimate.
inline MomentValue moment_fn_checked(const JacobiParams& p, int k, double t,
                                     const QuadratureSpec& quad = {}) {
  if (k < 1) throw DomainError("moment_fn: k must be >= 1");
  detail::check_distance(t, "moment_fn");
  quad.validate();
  if (t == 0.0) return {0.0, 0.0};
  if (p.kind() == MeasureKind::alpha_equals_beta) {
    // m_k^{(a,a)}(t) = 2^{-k} m_k^{(a,-1/2)}(2t)
    const JacobiParams reduced(p.alpha(), -0.5);
    auto inner = moment_fn_checked(reduced, k, 2.0 * t, quad);
    const double scale = std::ldexp(1.0, -k);
    return {scale * inner.value, scale * inner.residual};
  }
  const double lnch = log_cosh(t);
  const double tau = std::tanh(t);
  const double gap = one_minus_tanh(t);
  auto eval = [&](const QuadratureSpec& q) {
    const auto grid = make_measure_grid(p, q, gap);
    return integrate_grid(grid, [&](const MeasureNode& n) {
      return std::pow(detail::log_laplace_modulus(lnch, tau, gap, n), k);
    });
  };
  const double coarse = eval(quad);
  const double fine = eval(quad.doubled());
  return {fine, std::abs(fine - coarse)};
}

inline double moment_fn(const JacobiParams& p, int k, double t, const QuadratureSpec& quad = {}) {
  return moment_fn_checked(p, k, t, quad).value;
}

}  // namespace jacobi
