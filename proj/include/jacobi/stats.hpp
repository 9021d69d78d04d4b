#pragma once

// Empirical distributions, the limit laws of the central limit theorems,
// Kolmogorov-Smirnov distances and log-log rate fits.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "jacobi/error.hpp"
#include "jacobi/quadrature.hpp"
#include "jacobi/specfun.hpp"

namespace jacobi {

/// Sorted sample with CDF evaluation.
class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::vector<double> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) throw DomainError("EmpiricalDistribution: no samples");
    for (double x : samples_)
      if (std::isnan(x)) throw DomainError("EmpiricalDistribution: NaN sample");
    std::sort(samples_.begin(), samples_.end());
  }

  const std::vector<double>& samples() const noexcept { return samples_; }
  std::size_t count() const noexcept { return samples_.size(); }

  /// Fraction of samples <= x.
  double cdf(double x) const {
    return static_cast<double>(std::upper_bound(samples_.begin(), samples_.end(), x) - samples_.begin()) /
           static_cast<double>(count());
  }
  /// Fraction of samples < x.
  double cdf_left(double x) const {
    return static_cast<double>(std::lower_bound(samples_.begin(), samples_.end(), x) - samples_.begin()) /
           static_cast<double>(count());
  }

  double mean() const {
    double s = 0.0;
    for (double x : samples_) s += x;
    return s / static_cast<double>(count());
  }
  /// Unbiased sample variance (0 for a single sample).
  double variance() const {
    if (count() < 2) return 0.0;
    const double m = mean();
    double s = 0.0;
    for (double x : samples_) s += (x - m) * (x - m);
    return s / static_cast<double>(count() - 1);
  }
  double std_dev() const { return std::sqrt(variance()); }
  double standard_error() const { return std_dev() / std::sqrt(static_cast<double>(count())); }

  /// Quantile by linear interpolation between order statistics.
  double quantile(double q) const {
    if (!(q >= 0.0 && q <= 1.0)) throw DomainError("quantile: q must lie in [0,1]");
    const double h = q * static_cast<double>(count() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, count() - 1);
    return samples_[lo] + (h - static_cast<double>(lo)) * (samples_[hi] - samples_[lo]);
  }
  double iqr() const { return quantile(0.75) - quantile(0.25); }

 private:
  std::vector<double> samples_;
};

/// P(X <= x) for the Rayleigh law with density x^{2 alpha+1} e^{-x^2/2} / (2^alpha Gamma(alpha+1)).
inline double rayleigh_cdf(double alpha, double x) {
  if (!(alpha > -0.5)) throw DomainError("rayleigh_cdf requires alpha > -1/2");
  if (std::isnan(x)) throw DomainError("rayleigh_cdf: NaN argument");
  if (x <= 0.0) return 0.0;
  return reg_lower_inc_gamma(alpha + 1.0, 0.5 * x * x);
}

inline double rayleigh_density(double alpha, double x) {
  if (x <= 0.0) return 0.0;
  return std::exp((2.0 * alpha + 1.0) * std::log(x) - 0.5 * x * x - alpha * std::numbers::ln2 -
                  std::lgamma(alpha + 1.0));
}

/// Integral of j_alpha(lambda t) against the Rayleigh law. With u = t^2/2
/// the law becomes Gamma(alpha+1), integrated by generalized Gauss-Laguerre.
inline double hankel_rayleigh(double alpha, double lambda, int order = 80) {
  const auto rule = gauss_laguerre(order, alpha);
  double s = 0.0;
  for (std::size_t j = 0; j < rule.size(); ++j)
    s += rule.weights[j] * bessel_j(alpha, std::abs(lambda) * std::sqrt(2.0 * rule.nodes[j]));
  return s;
}

struct NormalLaw {
  double mean;
  double variance;
};
struct RayleighLaw {
  double alpha;
};
struct ConstantLaw {
  double value;
};

/// Target law of a limit theorem.
class LimitLaw {
 public:
  using Kind = std::variant<NormalLaw, RayleighLaw, ConstantLaw>;

  static LimitLaw normal(double mean, double variance) {
    if (!(variance > 0.0) || !std::isfinite(variance) || !std::isfinite(mean))
      throw DomainError("normal law requires finite mean and variance > 0");
    return LimitLaw(NormalLaw{mean, variance});
  }
  static LimitLaw rayleigh(double alpha) {
    if (!(alpha > -0.5)) throw DomainError("rayleigh law requires alpha > -1/2");
    return LimitLaw(RayleighLaw{alpha});
  }
  static LimitLaw constant(double value) {
    if (!std::isfinite(value)) throw DomainError("constant law requires a finite value");
    return LimitLaw(ConstantLaw{value});
  }

  const Kind& kind() const noexcept { return kind_; }

  double cdf(double x) const {
    return std::visit(
        [x](const auto& l) -> double {
          using L = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<L, NormalLaw>)
            return 0.5 * std::erfc(-(x - l.mean) / std::sqrt(2.0 * l.variance));
          else if constexpr (std::is_same_v<L, RayleighLaw>)
            return rayleigh_cdf(l.alpha, x);
          else
            return x >= l.value ? 1.0 : 0.0;
        },
        kind_);
  }
  /// P(X < x); differs from cdf only at atoms.
  double cdf_left(double x) const {
    if (const auto* c = std::get_if<ConstantLaw>(&kind_)) return x > c->value ? 1.0 : 0.0;
    return cdf(x);
  }

  double mean() const {
    return std::visit(
        [](const auto& l) -> double {
          using L = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<L, NormalLaw>) return l.mean;
          else if constexpr (std::is_same_v<L, RayleighLaw>)
            return std::sqrt(2.0) * std::exp(std::lgamma(l.alpha + 1.5) - std::lgamma(l.alpha + 1.0));
          else return l.value;
        },
        kind_);
  }
  double variance() const {
    return std::visit(
        [this](const auto& l) -> double {
          using L = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<L, NormalLaw>) return l.variance;
          else if constexpr (std::is_same_v<L, RayleighLaw>) {
            const double m = mean();
            return 2.0 * (l.alpha + 1.0) - m * m;
          } else return 0.0;
        },
        kind_);
  }

  std::string describe() const {
    return std::visit(
        [](const auto& l) -> std::string {
          using L = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<L, NormalLaw>)
            return "normal(mean=" + std::to_string(l.mean) + ", variance=" + std::to_string(l.variance) + ")";
          else if constexpr (std::is_same_v<L, RayleighLaw>)
            return "rayleigh(alpha=" + std::to_string(l.alpha) + ")";
          else return "constant(" + std::to_string(l.value) + ")";
        },
        kind_);
  }

 private:
  explicit LimitLaw(Kind k) : kind_(k) {}
  Kind kind_;
};

/// sup_x |F_emp(x) - F(x)|, evaluated on both sides of every jump of
/// either distribution function.
inline double ks_distance(const EmpiricalDistribution& e, const LimitLaw& law) {
  const auto& xs = e.samples();
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < xs.size()) {
    std::size_t j = i;
    while (j < xs.size() && xs[j] == xs[i]) ++j;
    const double below = static_cast<double>(i) / n;  // F_emp(x-)
    const double at = static_cast<double>(j) / n;     // F_emp(x)
    d = std::max({d, std::abs(at - law.cdf(xs[i])), std::abs(below - law.cdf_left(xs[i]))});
    i = j;
  }
  if (const auto* c = std::get_if<ConstantLaw>(&law.kind()))
    d = std::max({d, std::abs(e.cdf(c->value) - 1.0), e.cdf_left(c->value)});
  return std::clamp(d, 0.0, 1.0);
}

/// Dvoretzky-Kiefer-Wolfowitz radius: P(KS > eps) <= delta for n i.i.d. draws.
inline double dkw_radius(std::size_t n, double delta) {
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

/// Least-squares line through (ln x, ln y).
struct LogLogFit {
  double slope = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
  double r_squared = std::numeric_limits<double>::quiet_NaN();
  std::size_t points = 0;
};

/// Fit over the pairs with x > 0 and y > 0; needs at least three of them.
inline LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0 && std::isfinite(y[i])) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  LogLogFit fit;
  fit.points = lx.size();
  if (lx.size() < 3) return fit;
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

}  // namespace jacobi
