#pragma once

// The probability measure m_{alpha,beta} on [0,1] x [0,pi] behind the Jacobi
// product formula, in its three forms:
//
//   generic          alpha > beta > -1/2:
//       c (1-r^2)^{alpha-beta-1} (r sin phi)^{2 beta} r dr dphi
//   beta_degenerate  alpha > beta = -1/2:
//       c' (1-r^2)^{alpha-1/2} dr x (delta_0 + delta_pi)(phi) / 2
//   alpha_equals_beta alpha = beta > -1/2:
//       c' sin^{2 alpha} phi dphi x delta_1(r)
//
// Integration uses Gauss-Jacobi rules in coordinates where the singular
// weight factors are absorbed exactly:
//   generic: u = r^2 carries Beta(beta+1, alpha-beta), x = cos phi carries the
//            symmetric Jacobi weight (1-x^2)^{beta-1/2};
//   degenerate forms: one signed coordinate x in [-1,1] with (1-x^2)^{alpha-1/2}.

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <numbers>
#include <vector>

#include "jacobi/error.hpp"
#include "jacobi/params.hpp"
#include "jacobi/quadrature.hpp"
#include "jacobi/random.hpp"

namespace jacobi {

/// Integration point (r, phi) of the product-formula measure.
class AngularRadialPoint {
 public:
  static constexpr double kClampTol = 1e-15;

  AngularRadialPoint(double r, double phi) : r_(clamp(r, 1.0)), phi_(clamp(phi, std::numbers::pi)) {}

  double r() const noexcept { return r_; }
  double phi() const noexcept { return phi_; }

 private:
  static double clamp(double v, double hi) {
    if (v < -kClampTol || v > hi + kClampTol || std::isnan(v))
      throw DomainError("AngularRadialPoint outside [0,1] x [0,pi]");
    return v < 0.0 ? 0.0 : (v > hi ? hi : v);
  }

  double r_;
  double phi_;
};

/// A node of a tensor rule on the measure, with the quantities integrands
/// usually need precomputed. `one_minus_r` and `one_plus_cos` are exact
/// complements, needed near the corner (r, phi) = (1, pi).
struct MeasureNode {
  double r;
  double cos_phi;
  double sin_phi;
  double weight;
  double one_minus_r;
  double one_plus_cos;

  double phi() const { return std::atan2(sin_phi, cos_phi); }
  AngularRadialPoint point() const { return {r, phi()}; }
};

using MeasureGrid = std::vector<MeasureNode>;

/// Normalizing constant of the generic density with respect to dr dphi.
inline double measure_normalization(const JacobiParams& p) {
  const double a = p.alpha(), b = p.beta();
  switch (p.kind()) {
    case MeasureKind::generic:
      return std::exp(std::log(2.0) + std::lgamma(a + 1.0) - std::lgamma(0.5) -
                      std::lgamma(a - b) - std::lgamma(b + 0.5));
    case MeasureKind::beta_degenerate:
    case MeasureKind::alpha_equals_beta:
      return std::exp(std::log(2.0) + std::lgamma(a + 1.0) - std::lgamma(0.5) - std::lgamma(a + 0.5));
  }
  return 0.0;
}

/// Density of m_{alpha,beta} with respect to dr dphi (generic kind only).
inline double measure_density(const JacobiParams& p, const AngularRadialPoint& x) {
  if (p.kind() != MeasureKind::generic)
    throw DomainError(std::string("measure_density: the ") + to_string(p.kind()) +
                      " measure has no density in (r, phi); use integrate_m");
  const double a = p.alpha(), b = p.beta();
  const double r = x.r();
  const double one_minus = std::max(0.0, (1.0 - r) * (1.0 + r));
  const double angular = std::pow(r * std::sin(x.phi()), 2.0 * b);
  return measure_normalization(p) * std::pow(one_minus, a - b - 1.0) * angular * r;
}

/// Tensor rule integrating against m_{alpha,beta} in the absorbed
/// coordinates described above.
///
/// `corner_gap` is 1 - tau for integrands that depend on |1 + r e^{i phi} tau|:
/// they come close to a singularity at (r, phi) = (1, pi) as tau -> 1. Below
/// 1/2 the rules are graded toward that corner down to the gap's scale.
inline MeasureGrid make_measure_grid(const JacobiParams& p, const QuadratureSpec& quad,
                                     double corner_gap = 1.0) {
  quad.validate();
  MeasureGrid grid;
  const double a = p.alpha(), b = p.beta();
  const double gap = std::clamp(corner_gap, 0.0, 1.0);
  const bool graded = gap < 0.5;
  constexpr double kFloor = 1e-15;
  auto rule = [&](int n, double ea, double eb, bool toward_minus_one, double scale) {
    if (!graded) return *cached_gauss_jacobi(n, ea, eb);
    return graded_gauss_jacobi(n, ea, eb, toward_minus_one, std::max(kFloor, scale));
  };
  switch (p.kind()) {
    case MeasureKind::generic: {
      // u = r^2 = (1+y)/2 with weight (1-y)^{a-b-1} (1+y)^{b}.
      const auto ru = rule(quad.order_r, a - b - 1.0, b, false, gap);
      const auto rx = rule(quad.order_phi, b - 0.5, b - 0.5, true, 0.25 * gap * gap);
      grid.reserve(ru.size() * rx.size());
      for (std::size_t i = 0; i < ru.size(); ++i) {
        const double r = std::sqrt(0.5 * ru.lower_gap[i]);
        const double one_minus_r = 0.5 * ru.upper_gap[i] / (1.0 + r);
        for (std::size_t j = 0; j < rx.size(); ++j) {
          const double x = rx.nodes[j];
          grid.push_back({r, x, std::sqrt(rx.lower_gap[j] * rx.upper_gap[j]),
                          ru.weights[i] * rx.weights[j], one_minus_r, rx.lower_gap[j]});
        }
      }
      break;
    }
    case MeasureKind::beta_degenerate: {
      // Signed radius x = +-r (phi = 0 or pi) with weight (1-x^2)^{a-1/2}.
      const auto rx = rule(quad.order_r, a - 0.5, a - 0.5, true, 0.5 * gap);
      grid.reserve(rx.size());
      for (std::size_t j = 0; j < rx.size(); ++j) {
        const double x = rx.nodes[j];
        const bool left = x < 0.0;
        grid.push_back({std::abs(x), left ? -1.0 : 1.0, 0.0, rx.weights[j],
                        left ? rx.lower_gap[j] : rx.upper_gap[j], left ? 0.0 : 2.0});
      }
      break;
    }
    case MeasureKind::alpha_equals_beta: {
      // r = 1 and x = cos phi with weight (1-x^2)^{a-1/2}.
      const auto rx = rule(quad.order_phi, a - 0.5, a - 0.5, true, 0.25 * gap * gap);
      grid.reserve(rx.size());
      for (std::size_t j = 0; j < rx.size(); ++j) {
        grid.push_back({1.0, rx.nodes[j], std::sqrt(rx.lower_gap[j] * rx.upper_gap[j]),
                        rx.weights[j], 0.0, rx.lower_gap[j]});
      }
      break;
    }
  }
  return grid;
}

/// Sum of f(node) * weight over a prepared grid.
template <class F>
auto integrate_grid(const MeasureGrid& grid, F&& f) {
  using R = std::decay_t<decltype(f(grid.front()))>;
  R sum{};
  for (const auto& node : grid) sum += node.weight * f(node);
  return sum;
}

/// Integral of f(r, phi) against m_{alpha,beta}.
template <class F>
auto integrate_m(const JacobiParams& p, F&& f, const QuadratureSpec& quad = {}) {
  const auto grid = make_measure_grid(p, quad);
  return integrate_grid(grid, [&](const MeasureNode& n) { return f(n.point()); });
}

namespace detail {

/// (r, cos phi) distributed according to m_{alpha,beta}.
struct RadialCos {
  double r;
  double cos_phi;
};

inline RadialCos draw_radial_cos(const JacobiParams& p, RandomSource& rng) {
  const double a = p.alpha(), b = p.beta();
  switch (p.kind()) {
    case MeasureKind::generic:
      return {std::sqrt(rng.beta(b + 1.0, a - b)), 1.0 - 2.0 * rng.beta(b + 0.5, b + 0.5)};
    case MeasureKind::beta_degenerate: {
      const double r = std::sqrt(rng.beta(0.5, a + 0.5));
      return {r, rng.uniform() < 0.5 ? 1.0 : -1.0};
    }
    case MeasureKind::alpha_equals_beta:
      return {1.0, 1.0 - 2.0 * rng.beta(a + 0.5, a + 0.5)};
  }
  return {0.0, 1.0};
}

}  // namespace detail

/// Exact draw from m_{alpha,beta}.
///
/// Generic: r = sqrt(U), U ~ Beta(beta+1, alpha-beta); cos phi = 1 - 2V,
/// V ~ Beta(beta+1/2, beta+1/2). beta = -1/2: r^2 ~ Beta(1/2, alpha+1/2),
/// phi in {0, pi} with probability 1/2 each. alpha = beta: r = 1 and
/// V ~ Beta(alpha+1/2, alpha+1/2).
inline AngularRadialPoint sample_m(const JacobiParams& p, RandomSource& rng) {
  const auto rc = detail::draw_radial_cos(p, rng);
  const double c = std::clamp(rc.cos_phi, -1.0, 1.0);
  return {rc.r, std::acos(c)};
}

}  // namespace jacobi
