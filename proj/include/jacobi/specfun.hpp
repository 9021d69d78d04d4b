#pragma once

// Scalar special functions: log-Gamma (real and complex), the regularized
// lower incomplete gamma function, the Gauss hypergeometric function on the
// negative real axis, and the normalized Bessel function j_alpha.

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "jacobi/error.hpp"
#include "jacobi/params.hpp"

namespace jacobi {

inline double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("log_gamma requires x > 0");
  return std::lgamma(x);
}

/// Principal branch of log Gamma(z) (Lanczos, g = 7), with reflection for Re z < 1/2.
inline Complex log_gamma(Complex z) {
  using std::numbers::pi;
  if (z.real() < 0.5) {
    // log Gamma(z) = log(pi / sin(pi z)) - log Gamma(1 - z)
    return std::log(pi / std::sin(pi * z)) - log_gamma(1.0 - z);
  }
  static constexpr std::array<double, 9> coef = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  z -= 1.0;
  Complex x = coef[0];
  for (std::size_t i = 1; i < coef.size(); ++i) x += coef[i] / (z + static_cast<double>(i));
  const Complex t = z + 7.5;
  return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

/// Digamma psi(z) = Gamma'(z)/Gamma(z): reflection, upward recurrence to
/// Re z >= 10, then the asymptotic series.
inline Complex digamma(Complex z) {
  using std::numbers::pi;
  if (z.real() < 0.5) return digamma(1.0 - z) - pi / std::tan(pi * z);
  Complex shift = 0.0;
  while (z.real() < 10.0) {
    shift -= 1.0 / z;
    z += 1.0;
  }
  const Complex w = 1.0 / (z * z);
  // Bernoulli terms B_2k / (2k z^2k), k = 1..7
  const Complex tail =
      w * (1.0 / 12 - w * (1.0 / 120 - w * (1.0 / 252 - w * (1.0 / 240 - w * (1.0 / 132 - w * (691.0 / 32760 - w / 12.0))))));
  return shift + std::log(z) - 0.5 / z - tail;
}

/// P(a, x) = gamma(a, x) / Gamma(a).
inline double reg_lower_inc_gamma(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0) || !std::isfinite(a))
    throw DomainError("reg_lower_inc_gamma requires a > 0 and x >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return boost::math::gamma_p(a, x);
}

namespace detail {

struct SeriesSum {
  Complex value;
  int terms = 0;
  bool converged = false;
};

inline constexpr int kSeriesCap = 10000;
inline constexpr double kSeriesRelTol = 1e-16;

/// Partial sums of 2F1(a, b; c; w) for |w| < 1 with Kahan-compensated
/// accumulation. Stops once three consecutive terms are below the relative
/// tolerance, or when the series terminates.
inline SeriesSum hypergeometric_series(Complex a, Complex b, Complex c, double w,
                                       int cap = kSeriesCap) {
  Complex sum = 1.0, comp = 0.0, term = 1.0;
  int small_run = 0;
  for (int n = 0; n < cap; ++n) {
    const double dn = n;
    term *= (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * w;
    // Kahan on each component.
    const Complex y = term - comp;
    const Complex s = sum + y;
    comp = (s - sum) - y;
    sum = s;
    if (term == 0.0) return {sum, n + 1, true};
    if (std::abs(term) < kSeriesRelTol * std::abs(sum)) {
      if (++small_run == 3) return {sum, n + 1, true};
    } else {
      small_run = 0;
    }
  }
  return {sum, cap, false};
}

inline bool near_nonpositive_integer(Complex z, double tol) {
  const double re = std::round(z.real());
  return re <= 0.0 && std::abs(z - re) < tol;
}

inline double distance_to_integer(Complex z) {
  return std::abs(z - std::round(z.real()));
}

/// 2F1(A, B; C; w) for w close to 1 by the connection formula, given
/// v = 1 - w directly so it keeps full relative precision.
/// Requires s = C - A - B away from the integers.
inline Complex hypergeometric_near_one(Complex A, Complex B, Complex C, double v, bool& ok) {
  ok = false;
  const Complex s = C - A - B;
  if (distance_to_integer(s) == 0.0 || !(v > 0.0)) return {};
  auto rgamma_log = [](Complex z, bool& zero) -> Complex {
    zero = near_nonpositive_integer(z, 1e-14);
    return zero ? Complex{} : log_gamma(z);
  };
  bool z1 = false, z2 = false, z3 = false, z4 = false;
  const Complex lg_c = log_gamma(C);
  const Complex l1 = rgamma_log(C - A, z1), l2 = rgamma_log(C - B, z2);
  const Complex l3 = rgamma_log(A, z3), l4 = rgamma_log(B, z4);
  Complex total = 0.0;
  if (!z1 && !z2) {
    auto f1 = hypergeometric_series(A, B, 1.0 - s, v);
    if (!f1.converged) return {};
    total += std::exp(lg_c + log_gamma(s) - l1 - l2) * f1.value;
  }
  if (!z3 && !z4) {
    auto f2 = hypergeometric_series(C - A, C - B, s + 1.0, v);
    if (!f2.converged) return {};
    total += std::exp(s * std::log(v) + lg_c + log_gamma(-s) - l3 - l4) * f2.value;
  }
  ok = std::isfinite(total.real()) && std::isfinite(total.imag());
  return total;
}

/// 2F1(A, B; A+B+m; w) for an integer m >= 0 and v = 1 - w in (0, 1): the
/// logarithmic connection formulas. A and B must not be non-positive
/// integers (those cases terminate and never reach here).
inline Complex hypergeometric_log_case(Complex A, Complex B, int m, double v, bool& ok) {
  ok = false;
  if (near_nonpositive_integer(A, 1e-14) || near_nonpositive_integer(B, 1e-14)) return {};
  const Complex C = A + B + static_cast<double>(m);
  const double lnv = std::log(v);
  Complex finite = 0.0;
  if (m > 0) {
    // Gamma(m) Gamma(C) / (Gamma(A+m) Gamma(B+m)) sum_{n<m} (A)_n (B)_n / (n! (1-m)_n) v^n
    Complex term = 1.0, sum = 1.0;
    for (int n = 0; n + 1 < m; ++n) {
      term *= (A + double(n)) * (B + double(n)) / ((n + 1.0) * (1.0 - m + n)) * v;
      sum += term;
    }
    finite = std::exp(std::lgamma(double(m)) + log_gamma(C) - log_gamma(A + double(m)) - log_gamma(B + double(m))) * sum;
  }
  // (-v)^m Gamma(C) / (Gamma(A) Gamma(B)) sum_n (A+m)_n (B+m)_n / (n! (n+m)!) v^n
  //   [ln v - psi(n+1) - psi(n+m+1) + psi(A+n+m) + psi(B+n+m)]
  const Complex Am = A + double(m), Bm = B + double(m);
  Complex coef = 1.0 / std::exp(std::lgamma(m + 1.0));  // (A+m)_n (B+m)_n v^n / (n! (n+m)!)
  Complex psi_a = digamma(Am), psi_b = digamma(Bm);
  double psi_1 = -std::numbers::egamma;                        // psi(n+1)
  double psi_m = std::real(digamma(Complex(m + 1.0, 0.0)));   // psi(n+m+1)
  Complex sum = 0.0, comp = 0.0;
  int small_run = 0;
  bool converged = false;
  for (int n = 0; n < kSeriesCap; ++n) {
    const Complex term = coef * (lnv - psi_1 - psi_m + psi_a + psi_b);
    const Complex y = term - comp;
    const Complex t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (std::abs(term) < kSeriesRelTol * std::abs(sum)) {
      if (++small_run == 3) {
        converged = true;
        break;
      }
    } else {
      small_run = 0;
    }
    const double dn = n;
    coef *= (Am + dn) * (Bm + dn) / ((dn + 1.0) * (dn + m + 1.0)) * v;
    psi_a += 1.0 / (Am + dn);
    psi_b += 1.0 / (Bm + dn);
    psi_1 += 1.0 / (dn + 1.0);
    psi_m += 1.0 / (dn + m + 1.0);
  }
  if (!converged) return {};
  const Complex scale = std::exp(log_gamma(C) - log_gamma(A) - log_gamma(B)) * std::pow(-v, m);
  const Complex total = finite - scale * sum;
  ok = std::isfinite(total.real()) && std::isfinite(total.imag());
  return total;
}

/// Distance from an integer below which the ordinary connection formula is
/// replaced: its two terms carry Gamma(+-s) poles whose cancellation costs
/// about eps / distance in relative accuracy.
inline constexpr double kNearIntegerRadius = 1e-5;

/// Below this value of v = 1 - w the expansion around w = 1 is used first.
inline constexpr double kUnitArgumentSwitch = 0.05;

/// 2F1(A, B; C; 1 - v) for v in (0, 1), with any value of C - A - B.
inline Complex hypergeometric_unit_argument(Complex A, Complex B, Complex C, double v, bool& ok) {
  const Complex s = C - A - B;
  const double m = std::round(s.real());
  const Complex sigma = s - m;
  const double dist = std::abs(sigma);
  if (dist >= kNearIntegerRadius) return hypergeometric_near_one(A, B, C, v, ok);
  auto at_integer = [&](Complex a0, Complex b0, bool& good) -> Complex {
    // a0 + b0 = C - m exactly; negative m goes through Euler's transformation.
    if (m >= 0) return hypergeometric_log_case(a0, b0, static_cast<int>(m), v, good);
    return std::pow(v, m) * hypergeometric_log_case(C - a0, C - b0, static_cast<int>(-m), v, good);
  };
  // Move s to m + xi u along the line through s, keeping C fixed and
  // splitting the change evenly between A and B.
  auto shifted = [&](Complex target_s, bool& good) -> Complex {
    const Complex d = 0.5 * (s - target_s);
    const Complex a0 = A + d, b0 = B + d;
    if (target_s == Complex(m, 0.0)) return at_integer(a0, b0, good);
    return hypergeometric_near_one(a0, b0, C, v, good);
  };
  if (dist == 0.0) return shifted(m, ok);
  // Quadratic interpolation in xi through xi = -h, 0, h, evaluated at xi = dist.
  const Complex u = sigma / dist;
  const double h = kNearIntegerRadius;
  bool g0 = false, gp = false, gm = false;
  const Complex f0 = shifted(m, g0);
  const Complex fp = shifted(m + h * u, gp);
  const Complex fm = shifted(m - h * u, gm);
  ok = g0 && gp && gm;
  const double x = dist / h;
  return f0 + 0.5 * x * (fp - fm) + 0.5 * x * x * (fp + fm - 2.0 * f0);
}

[[noreturn]] inline void throw_2f1_failure(Complex a, Complex b, double c, double z) {
  std::ostringstream os;
  os.precision(17);
  os << "2F1 did not converge for a=" << a << " b=" << b << " c=" << c << " z=" << z;
  throw NumericError(os.str());
}

}  // namespace detail

/// Gauss hypergeometric function 2F1(a, b; c; z) for real z <= 0.
///
/// |z| <= 1/2 sums the defining series directly. Otherwise the Pfaff
/// transformation maps z to w = z/(z-1) in (1/3, 1); of the two Pfaff forms
/// the one whose transformed series has the larger Re(C-A-B) is used, which
/// gives the faster tail. Close to w = 1 the expansion in powers of 1 - w
/// takes over, including the logarithmic cases where C-A-B is an integer.
inline Complex gauss_2f1(Complex a, Complex b, double c, double z) {
  if (!(z <= 0.0) || !std::isfinite(z)) throw DomainError("gauss_2f1 requires finite z <= 0");
  if (c <= 0.0 && c == std::round(c))
    throw DomainError("gauss_2f1: c must not be a non-positive integer");
  if (z == 0.0 || a == 0.0 || b == 0.0) return 1.0;

  if (z >= -0.5) {
    auto s = detail::hypergeometric_series(a, b, c, z);
    if (!s.converged) detail::throw_2f1_failure(a, b, c, z);
    return s.value;
  }

  const double v = 1.0 / (1.0 - z);  // 1 - w
  const double w = -z * v;
  const double log_one_minus_z = std::log1p(-z);
  // Form A: (1-z)^{-a} F(a, c-b; c; w);  Form B: (1-z)^{-b} F(c-a, b; c; w).
  const bool use_b = a.real() >= b.real();
  const Complex pulled = use_b ? b : a;
  const Complex A = use_b ? c - a : a;
  const Complex B = use_b ? b : c - b;
  const Complex prefactor = std::exp(-pulled * log_one_minus_z);

  // The series in w needs about 37 / v terms; below v = 1/20 the expansion
  // in powers of v is far cheaper.
  bool ok = false;
  if (v < detail::kUnitArgumentSwitch) {
    const Complex near = detail::hypergeometric_unit_argument(A, B, c, v, ok);
    if (ok) return prefactor * near;
  }
  auto s = detail::hypergeometric_series(A, B, c, w);
  if (s.converged) return prefactor * s.value;
  if (v >= detail::kUnitArgumentSwitch) {
    const Complex near = detail::hypergeometric_unit_argument(A, B, c, v, ok);
    if (ok) return prefactor * near;
  }
  detail::throw_2f1_failure(a, b, c, z);
}

/// Normalized Bessel function j_alpha(t) = 0F1(alpha+1; -t^2/4), alpha > -1/2.
inline double bessel_j(double alpha, double t) {
  if (!(alpha > -0.5)) throw DomainError("bessel_j requires alpha > -1/2");
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("bessel_j requires finite t >= 0");
  if (t == 0.0) return 1.0;
  const double q = 0.25 * t * t;
  if (t <= 8.0 || q <= alpha + 1.0) {
    // Alternating series; below these bounds the largest term stays modest.
    double term = 1.0, sum = 1.0, comp = 0.0;
    for (int n = 0; n < 1000; ++n) {
      term *= -q / ((n + 1.0) * (alpha + 1.0 + n));
      const double y = term - comp;
      const double s = sum + y;
      comp = (s - sum) - y;
      sum = s;
      if (std::abs(term) < 1e-17 * std::max(1.0, std::abs(sum))) break;
    }
    return sum;
  }
  // j_alpha(t) = Gamma(alpha+1) (2/t)^alpha J_alpha(t), combined in log space.
  const double J = boost::math::cyl_bessel_j(alpha, t);
  if (J == 0.0) return 0.0;
  const double log_mag = std::lgamma(alpha + 1.0) + alpha * std::log(2.0 / t) + std::log(std::abs(J));
  return std::copysign(std::exp(log_mag), J);
}

}  // namespace jacobi
