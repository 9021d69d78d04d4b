#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "jacobi/limits.hpp"

namespace {

using namespace jacobi;

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
  return v;
}

std::vector<double> dyadic(double hi) {
  std::vector<double> v;
  for (double x = 1.0; x <= hi; x *= 2.0) v.push_back(x);
  return v;
}

const std::vector<double> kDecades{10, 30, 100, 300, 1000};
const std::vector<double> kLambdaGrid{-2, -1.5, -1, -0.5, -0.25, 0.25, 0.5, 1, 1.5, 2};
const std::vector<double> kPhaseT{0, 0.5, 1, 1.5, 2, 3, 4, 5, 6, 8, 10};

void expect_valid(const LimitReport& r) {
  for (const auto& p : r.residuals) {
    EXPECT_GE(p.residual, 0.0);
    EXPECT_TRUE(std::isfinite(p.residual));
  }
  if (r.residuals.size() >= 3) EXPECT_TRUE(std::isfinite(r.fitted_exponent)) << r.name;
}

TEST(AlphaLimit, TrivialCases) {
  const auto zero = prop_alpha_limit(0.5, 0.0, linspace(0, 5, 11), kDecades);
  for (const auto& p : zero.residuals) EXPECT_LT(p.residual, 1e-13);
  const auto at_origin = prop_alpha_limit(0.5, 1.0, {0.0}, kDecades);
  for (const auto& p : at_origin.residuals) EXPECT_EQ(p.residual, 0.0);
}

TEST(AlphaLimit, DecaysLikeInverseSquareRoot) {
  const auto r = prop_alpha_limit(0.5, 1.0, linspace(0, 5, 51), kDecades);
  expect_valid(r);
  EXPECT_LE(r.fitted_exponent, -0.45);
  EXPECT_LT(r.max_normalized(), 1.0);
  EXPECT_THROW(prop_alpha_limit(0.5, 1.0, {1.0}, {0.4, 10.0}), DomainError);
  EXPECT_THROW(prop_alpha_limit(0.5, 1.0, {1.0}, {30.0, 10.0}), DomainError);
}

TEST(CoupledLimit, TrivialCasesAndRate) {
  const auto zero = prop_coupled_limit(2.0, 1.0, 0.0, linspace(0, 5, 11), kDecades);
  for (const auto& p : zero.residuals) EXPECT_LT(p.residual, 1e-13);
  const auto r = prop_coupled_limit(2.0, 1.0, 1.0, linspace(0, 5, 51), kDecades);
  expect_valid(r);
  EXPECT_LE(r.fitted_exponent, -0.45);
  EXPECT_THROW(prop_coupled_limit(1.0, 1.0, 1.0, {1.0}, kDecades), DomainError);
  EXPECT_THROW(prop_coupled_limit(2.0, 0.0, 1.0, {1.0}, kDecades), DomainError);
}

TEST(CoupledLimit, PhaseAgainstSimpsonOfLimitingIntegrand) {
  // coupled_phase(c, t) = ln sqrt(ch^2 t + sh^2 t / c), checked in the
  // integrated form int_0^t d/dx of the same expression.
  for (double c : {1.5, 2.0, 5.0})
    for (double t : {0.3, 2.0, 7.0}) {
      auto deriv = [c](double x) {
        const double ch = std::cosh(x), sh = std::sinh(x);
        return ch * sh * (1.0 + 1.0 / c) / (ch * ch + sh * sh / c);
      };
      const int panels = 2000;
      const double h = t / panels;
      double s = deriv(0.0) + deriv(t);
      for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * deriv(i * h);
      EXPECT_NEAR(coupled_phase(c, t), s * h / 3.0, 1e-10) << c << ' ' << t;
    }
  EXPECT_NEAR(coupled_phase(2.0, 300.0), 300.0 - std::numbers::ln2 + 0.5 * std::log(1.5), 1e-12);
}

TEST(BesselLimit, TrivialCases) {
  const JacobiParams p(2.5, 0.5);
  for (const auto& pt : prop_bessel_limit(p, 0.0, 3.0, dyadic(64)).residuals) EXPECT_LT(pt.residual, 1e-13);
  for (const auto& pt : prop_bessel_limit(p, 1.0, 0.0, dyadic(64)).residuals) EXPECT_EQ(pt.residual, 0.0);
}

TEST(BesselLimit, NormalizedResidualBoundedAndAsymptoticRate) {
  const JacobiParams p(2.5, 0.5);
  const auto full = prop_bessel_limit(p, 1.0, 3.0, dyadic(256));
  expect_valid(full);
  // residual * n / (|lambda| T^2) stays bounded over the whole range.
  EXPECT_LT(full.max_normalized(), 1.0);
  // The first few n are pre-asymptotic; from n = 16 on the slope is the
  // predicted -1.
  const auto tail = prop_bessel_limit(p, 1.0, 3.0, {16, 32, 64, 128, 256});
  EXPECT_LE(tail.fitted_exponent, -0.95);
}

TEST(MomentPhase, ExplicitConstantBoundsTheResidual) {
  const JacobiParams p(3.0, 0.5);
  const double C = moment_phase_constant(p);
  EXPECT_NEAR(C, 18.0 / (std::numbers::e * 1.5), 1e-14);
  const auto r = prop_moment_phase(p, kLambdaGrid, kPhaseT);
  expect_valid(r);
  for (const auto& pt : r.residuals) {
    const double a = std::abs(pt.grid_value);
    EXPECT_LE(pt.residual, C * (a * a + a * a * a)) << pt.grid_value;
  }
  EXPECT_THROW(moment_phase_constant(JacobiParams(1.0, 0.5)), DomainError);
}

TEST(MomentPhase, TrivialCases) {
  const JacobiParams p(3.0, 0.5);
  const auto zero = prop_moment_phase(p, {0.0}, kPhaseT);
  EXPECT_EQ(zero.residuals[0].residual, 0.0);
  const auto origin = prop_moment_phase(p, kLambdaGrid, {0.0});
  for (const auto& pt : origin.residuals) EXPECT_LT(pt.residual, 1e-15);
}

TEST(MomentPhase, FittedExponentStableUnderQuadratureDoubling) {
  const JacobiParams p(3.0, 0.5);
  QuadratureSpec q;
  const auto base = prop_moment_phase(p, kLambdaGrid, kPhaseT, q);
  const auto fine = prop_moment_phase(p, kLambdaGrid, kPhaseT, q.doubled());
  EXPECT_LE(std::abs(base.fitted_exponent - fine.fitted_exponent), 0.02);
}

TEST(ExpPhase, ResidualIsLinearNearZero) {
  // t - m_1(t) tends to a positive constant, so |e^{i lambda t} - e^{i lambda m_1(t)}|
  // is of size |lambda| for small lambda: the residual over lambda^2 + |lambda|^3
  // grows as lambda -> 0 while the residual over |lambda| + lambda^2 + |lambda|^3
  // stays bounded.
  const JacobiParams p(3.0, 0.5);
  const auto r = cor_exp_phase(p, {0.01, 0.03, 0.1, 0.3, 1.0, 2.0}, kPhaseT);
  expect_valid(r);
  EXPECT_GT(r.residuals[0].normalized, 10.0 * r.residuals[2].normalized);
  for (const auto& pt : r.residuals) {
    const double a = std::abs(pt.grid_value);
    EXPECT_LT(pt.residual / (a + a * a + a * a * a), 1.0);
  }
  EXPECT_NEAR(r.fitted_exponent, 1.0, 0.15);
}

TEST(ExpPhase, TrivialCases) {
  const JacobiParams p(3.0, 0.5);
  EXPECT_EQ(cor_exp_phase(p, {0.0}, kPhaseT).residuals[0].residual, 0.0);
  for (const auto& pt : cor_exp_phase(p, kLambdaGrid, {0.0}).residuals) EXPECT_LT(pt.residual, 1e-15);
}

TEST(M1Bounds, BelowIdentityAndFlatGap) {
  for (const auto& p : {JacobiParams(3.0, 0.5), JacobiParams(0.5, -0.5), JacobiParams(2.0, 2.0)}) {
    const auto b = m1_bounds(p, linspace(0.0, 50.0, 101));
    EXPECT_TRUE(b.below_identity);
    EXPECT_LE(b.max_excess, 1e-9);
    EXPECT_LT(b.flat_variation, 1e-3);
    EXPECT_GT(b.max_gap, 0.0);
    EXPECT_EQ(b.values.front().second, 0.0);
  }
}

TEST(M1Bounds, GapMatchesClosedFormWhenBetaVanishes) {
  // m_1 = ln ch t, so t - m_1(t) -> ln 2.
  const auto b = m1_bounds(JacobiParams(2.0, 0.0), linspace(0.0, 50.0, 51));
  EXPECT_NEAR(b.max_gap, std::numbers::ln2, 1e-9);
}

TEST(Taylor, TrivialCases) {
  const JacobiParams p(2.0, 0.0);
  for (const auto& pt : taylor_residual(p, 0.0, 1.0, 1.0 / 6, 1.0 / 6, dyadic(64)).residuals)
    EXPECT_LT(pt.residual, 1e-14);
  for (const auto& pt : taylor_residual(p, 1.0, 0.0, 1.0 / 6, 1.0 / 6, dyadic(64)).residuals)
    EXPECT_LT(pt.residual, 1e-14);
}

TEST(Taylor, SlopeMatchesRemainderOrder) {
  const JacobiParams p(2.0, 0.0);
  const double a = 1.0 / 6, r = 1.0 / 6;
  const auto rep = taylor_residual(p, 1.0, 1.0, a, r, dyadic(4096));
  expect_valid(rep);
  EXPECT_DOUBLE_EQ(rep.expected_exponent, -1.0);
  EXPECT_LE(rep.fitted_exponent, -std::min(a + 6 * r, 2 * a + 4 * r) + 0.1);
}

TEST(Taylor, ExpansionTermsAgainstDirectTaylorSeries) {
  // With n = 1, a = r = 0 the expansion is the Taylor polynomial in t of
  // phi_{i rho - lambda}(t); its error at small t is O(t^4 lambda^2 + t^6).
  const JacobiParams p(2.0, 0.0);
  const double lam = 0.3;
  for (double t : {0.02, 0.04}) {
    const Complex exact = jacobi_phi_series(p, shifted_spectral(p, lam), t);
    EXPECT_LT(std::abs(exact - taylor_expansion(p, lam, t, 0.0, 0.0, 1.0)), 5.0 * std::pow(t, 4)) << t;
  }
}

}  // namespace
