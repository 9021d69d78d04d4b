#pragma once

// The Jacobi function phi_lambda^{(alpha,beta)}(t), by two independent routes:
// the hypergeometric series and the Laplace-type integral against m_{alpha,beta}.

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "jacobi/error.hpp"
#include "jacobi/measure.hpp"
#include "jacobi/params.hpp"
#include "jacobi/specfun.hpp"

namespace jacobi {

/// Beyond this distance sh^2 t is close to overflow; evaluations refuse.
inline constexpr double kMaxDistance = 350.0;

/// 1 - tanh t without cancellation.
inline double one_minus_tanh(double t) {
  const double e = std::exp(-2.0 * std::abs(t));
  return 2.0 * e / (1.0 + e);
}

/// ln ch t without overflow.
inline double log_cosh(double t) {
  const double a = std::abs(t);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

namespace detail {

inline void check_distance(double t, const char* who) {
  if (!(t >= 0.0) || std::isnan(t)) throw DomainError(std::string(who) + ": t must be >= 0");
  if (t > kMaxDistance) {
    std::ostringstream os;
    os << who << ": t = " << t << " exceeds the supported range " << kMaxDistance;
    throw OverflowError(os.str());
  }
}

/// ln |1 + r e^{i phi} tau| from (r cos phi, r sin phi, tau), for sampled
/// points away from the zero at r = 1, phi = pi, tau = 1.
inline double log_modulus_unit(double rc, double rs, double tau) {
  const double re = 1.0 + rc * tau;
  const double im = rs * tau;
  const double q = re * re + im * im;
  if (q > 0.5) return 0.5 * std::log1p(tau * (2.0 * rc + tau * (rc * rc + rs * rs)));
  return 0.5 * std::log(q);
}

/// ln |1 + r e^{i phi} tau| at a measure node, given gap = 1 - tau.
///
/// Near the corner the squared modulus is (1 - r tau)^2 + 2 r tau (1 + cos phi),
/// a sum of nonnegative terms that stays accurate even when tau rounds to 1.
inline double log_modulus_node(const MeasureNode& n, double tau, double gap) {
  const double rc = n.r * n.cos_phi;
  const double excess = tau * (2.0 * rc + tau * n.r * n.r);
  if (excess > -0.5) return 0.5 * std::log1p(excess);
  const double d = n.one_minus_r + n.r * gap;
  return 0.5 * std::log(d * d + 2.0 * n.r * tau * n.one_plus_cos);
}

/// ln |ch t + r e^{i phi} sh t| at a measure node.
inline double log_laplace_modulus(double lnch, double tau, double gap, const MeasureNode& n) {
  return lnch + log_modulus_node(n, tau, gap);
}

}  // namespace detail

/// phi_lambda(t) = 2F1((rho - i lambda)/2, (rho + i lambda)/2; alpha+1; -sh^2 t).
inline Complex jacobi_phi_series(const JacobiParams& p, Complex lambda, double t) {
  detail::check_distance(t, "jacobi_phi_series");
  if (t == 0.0) return 1.0;
  const Complex i{0.0, 1.0};
  const Complex a = 0.5 * (p.rho() - i * lambda);
  const Complex b = 0.5 * (p.rho() + i * lambda);
  const double sh = std::sinh(t);
  return gauss_2f1(a, b, p.alpha() + 1.0, -sh * sh);
}

/// Spectral parameter i rho - lambda, the line on which the Jacobi functions
/// are characteristic functions of probability measures.
inline Complex shifted_spectral(const JacobiParams& p, double lambda) {
  return {-lambda, p.rho()};
}

namespace detail {

template <class Eval>
auto integrate_with_doubling(Eval&& eval, QuadratureSpec quad, double tol, const char* who) {
  quad.validate();
  auto coarse = eval(quad);
  for (;;) {
    const QuadratureSpec fine_spec = quad.doubled();
    auto fine = eval(fine_spec);
    const double residual = std::abs(fine - coarse);
    if (residual <= tol) return std::make_pair(fine, residual);
    if (fine_spec.order_r >= 1024 || fine_spec.order_phi >= 1024) {
      std::ostringstream os;
      os << who << ": quadrature did not converge, estimated residual " << residual;
      throw NumericError(os.str(), residual);
    }
    quad = fine_spec;
    coarse = fine;
  }
}

}  // namespace detail

/// phi_lambda(t) as the integral of |ch t + r e^{i phi} sh t|^{i lambda - rho}
/// against m_{alpha,beta}. The rule is doubled until successive values agree
/// within `tol`.
inline Complex jacobi_phi_integral(const JacobiParams& p, Complex lambda, double t,
                                   const QuadratureSpec& quad = {}, double tol = 1e-10) {
  detail::check_distance(t, "jacobi_phi_integral");
  if (t == 0.0) return 1.0;
  const Complex i{0.0, 1.0};
  // phi is even in lambda; of lambda and -lambda take the one whose exponent
  // has the smaller real part in modulus. On the line i rho - R the other
  // choice weights the corner singularity by e^{2 rho t}.
  const Complex mu = lambda.imag() > 0.0 ? -lambda : lambda;
  const Complex exponent = i * mu - p.rho();
  const double lnch = log_cosh(t);
  const double tau = std::tanh(t);
  const double gap = one_minus_tanh(t);
  auto eval = [&](const QuadratureSpec& q) {
    const auto grid = make_measure_grid(p, q, gap);
    return integrate_grid(grid, [&](const MeasureNode& n) {
      return std::exp(exponent * detail::log_laplace_modulus(lnch, tau, gap, n));
    });
  };
  return detail::integrate_with_doubling(eval, quad, tol, "jacobi_phi_integral").first;
}

}  // namespace jacobi
