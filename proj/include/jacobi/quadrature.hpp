#pragma once

// Gaussian quadrature rules built with the Golub-Welsch eigenvalue method.

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "jacobi/error.hpp"

namespace jacobi {

/// Nodes and weights of a one-dimensional rule. Weights are normalized to
/// sum to one, so the rule integrates against the probability measure
/// proportional to its weight function.
///
/// `lower_gap` and `upper_gap` hold 1 + x and 1 - x for rules on [-1,1],
/// computed without cancellation so integrands can resolve endpoints.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> lower_gap;
  std::vector<double> upper_gap;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Orders of the tensor rule used on [0,1] x [0,pi].
struct QuadratureSpec {
  int order_r = 48;
  int order_phi = 48;

  void validate() const {
    if (order_r < 8 || order_phi < 8)
      throw DomainError("quadrature orders must be >= 8");
  }
  QuadratureSpec doubled() const { return {2 * order_r, 2 * order_phi}; }
};

namespace detail {

inline QuadratureRule golub_welsch(const std::vector<double>& diag,
                                   const std::vector<double>& offdiag_sq) {
  const auto n = static_cast<Eigen::Index>(diag.size());
  Eigen::VectorXd d(n), e(n > 1 ? n - 1 : 1);
  for (Eigen::Index i = 0; i < n; ++i) d[i] = diag[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    e[i] = std::sqrt(offdiag_sq[static_cast<std::size_t>(i)]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(d, e.head(n > 1 ? n - 1 : 0), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw NumericError("Golub-Welsch eigen decomposition failed");

  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v0 = solver.eigenvectors()(0, i);
    rule.nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()[i];
    rule.weights[static_cast<std::size_t>(i)] = v0 * v0;
    total += v0 * v0;
  }
  for (auto& w : rule.weights) w /= total;
  return rule;
}

}  // namespace detail

/// Gauss-Jacobi rule for the weight (1-x)^a (1+x)^b on [-1,1], a,b > -1.
inline QuadratureRule gauss_jacobi(int n, double a, double b) {
  if (n < 1) throw DomainError("quadrature order must be positive");
  if (!(a > -1.0) || !(b > -1.0))
    throw DomainError("Gauss-Jacobi exponents must exceed -1");
  std::vector<double> diag(static_cast<std::size_t>(n));
  std::vector<double> off(static_cast<std::size_t>(n > 1 ? n - 1 : 0));
  const double ab = a + b;
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + ab;
    if (k == 0)
      diag[0] = (b - a) / (ab + 2.0);
    else
      diag[static_cast<std::size_t>(k)] = (b * b - a * a) / (s * (s + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    double beta_k;
    if (k == 1)
      beta_k = 4.0 * (1.0 + a) * (1.0 + b) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
    else
      beta_k = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    off[static_cast<std::size_t>(k - 1)] = beta_k;
  }
  auto rule = detail::golub_welsch(diag, off);
  if (a == b) {
    // Enforce exact mirror symmetry; odd integrands then cancel to rounding.
    const std::size_t m = rule.size();
    for (std::size_t i = 0; i < m / 2; ++i) {
      const std::size_t j = m - 1 - i;
      const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
      const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
      rule.nodes[i] = -x;
      rule.nodes[j] = x;
      rule.weights[i] = rule.weights[j] = w;
    }
    if (m % 2 == 1) rule.nodes[m / 2] = 0.0;
  }
  for (double x : rule.nodes) {
    rule.lower_gap.push_back(1.0 + x);
    rule.upper_gap.push_back(1.0 - x);
  }
  return rule;
}

inline QuadratureRule gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

/// Generalized Gauss-Laguerre rule for the weight x^a e^{-x} on [0, inf).
inline QuadratureRule gauss_laguerre(int n, double a) {
  if (n < 1) throw DomainError("quadrature order must be positive");
  if (!(a > -1.0)) throw DomainError("Gauss-Laguerre exponent must exceed -1");
  std::vector<double> diag(static_cast<std::size_t>(n));
  std::vector<double> off(static_cast<std::size_t>(n > 1 ? n - 1 : 0));
  for (int k = 0; k < n; ++k) diag[static_cast<std::size_t>(k)] = 2.0 * k + a + 1.0;
  for (int k = 1; k < n; ++k) off[static_cast<std::size_t>(k - 1)] = k * (k + a);
  return detail::golub_welsch(diag, off);
}

/// Total mass of (1-x)^a (1+x)^b on [-1,1].
inline double jacobi_weight_mass(double a, double b) {
  return std::exp((a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                  std::lgamma(a + b + 2.0));
}

/// Process-wide memo of Gauss-Jacobi rules; rules are immutable once built.
inline std::shared_ptr<const QuadratureRule> cached_gauss_jacobi(int n, double a, double b) {
  static std::mutex mutex;
  static std::map<std::tuple<int, double, double>, std::shared_ptr<const QuadratureRule>> cache;
  const auto key = std::make_tuple(n, a, b);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto rule = std::make_shared<const QuadratureRule>(gauss_jacobi(n, a, b));
  std::lock_guard lock(mutex);
  if (cache.size() > 512) cache.clear();
  return cache.emplace(key, std::move(rule)).first->second;
}

/// Gauss-Jacobi rule for (1-x)^a (1+x)^b on [-1,1] on a mesh graded
/// geometrically toward one endpoint: panel boundaries sit at distance
/// 2 sigma^k from it until the distance drops below `min_scale`. Each panel
/// carries an n-point rule that absorbs whichever endpoint factor it touches.
/// Weights are normalized by the exact mass of the weight function.
inline QuadratureRule graded_gauss_jacobi(int n, double a, double b, bool toward_minus_one,
                                          double min_scale, double sigma = 0.15) {
  std::vector<double> cuts;  // distances from the refined endpoint, decreasing
  for (double d = 2.0 * sigma; d >= min_scale && cuts.size() < 60; d *= sigma) cuts.push_back(d);
  if (cuts.empty()) {
    auto rule = *cached_gauss_jacobi(n, a, b);
    return rule;
  }
  // Panel edges in x, ascending.
  std::vector<double> edges;
  edges.push_back(-1.0);
  if (toward_minus_one) {
    for (auto it = cuts.rbegin(); it != cuts.rend(); ++it) edges.push_back(-1.0 + *it);
  } else {
    for (double d : cuts) edges.push_back(1.0 - d);
  }
  edges.push_back(1.0);

  QuadratureRule out;
  const double mass = jacobi_weight_mass(a, b);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double lo = edges[k], hi = edges[k + 1];
    const bool at_hi = (hi == 1.0), at_lo = (lo == -1.0);
    const double ea = at_hi ? a : 0.0, eb = at_lo ? b : 0.0;
    const auto panel = cached_gauss_jacobi(n, ea, eb);
    const double half = 0.5 * (hi - lo);
    const double scale = jacobi_weight_mass(ea, eb) * std::pow(half, 1.0 + ea + eb);
    for (std::size_t j = 0; j < panel->size(); ++j) {
      const double y = panel->nodes[j];
      const double x = lo + half * (1.0 + y);
      double w = panel->weights[j] * scale;
      if (!at_hi) w *= std::pow(half * (1.0 - y) + (1.0 - hi), a);
      if (!at_lo) w *= std::pow(half * (1.0 + y) + (lo + 1.0), b);
      out.nodes.push_back(x);
      out.weights.push_back(w / mass);
      out.lower_gap.push_back(at_lo ? half * panel->lower_gap[j] : (lo + 1.0) + half * (1.0 + y));
      out.upper_gap.push_back(at_hi ? half * panel->upper_gap[j] : (1.0 - hi) + half * (1.0 - y));
    }
  }
  return out;
}

}  // namespace jacobi
