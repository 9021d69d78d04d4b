#pragma once

#include <cmath>
#include <complex>
#include <sstream>

#include "jacobi/error.hpp"

namespace jacobi {

using Complex = std::complex<double>;

/// Which of the three forms the product-formula measure takes.
enum class MeasureKind { generic, beta_degenerate, alpha_equals_beta };

inline const char* to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::generic: return "generic";
    case MeasureKind::beta_degenerate: return "beta_degenerate";
    case MeasureKind::alpha_equals_beta: return "alpha_equals_beta";
  }
  return "unknown";
}

/// Index (alpha, beta) of a Jacobi hypergroup on [0, inf).
///
/// Valid iff alpha >= beta >= -1/2 and alpha > -1/2. rho = alpha + beta + 1
/// is always recomputed from the pair.
class JacobiParams {
 public:
  JacobiParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || beta < -0.5 ||
        alpha < beta || !(alpha > -0.5)) {
      std::ostringstream os;
      os << "invalid Jacobi parameters (alpha=" << alpha << ", beta=" << beta
         << "): need alpha >= beta >= -1/2 and alpha > -1/2";
      throw DomainError(os.str());
    }
  }

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double rho() const noexcept { return alpha_ + beta_ + 1.0; }

  MeasureKind kind() const noexcept {
    if (alpha_ == beta_) return MeasureKind::alpha_equals_beta;
    if (beta_ == -0.5) return MeasureKind::beta_degenerate;
    return MeasureKind::generic;
  }

  friend bool operator==(const JacobiParams&, const JacobiParams&) = default;

 private:
  double alpha_;
  double beta_;
};

/// Rank-one hyperbolic space H_k(F) over F = R, C, H (field_dim 1, 2, 4).
struct HyperbolicSpaceSpec {
  int field_dim;
  int k;
};

/// alpha = dk/2 - 1, beta = d/2 - 1.
inline JacobiParams hyperbolic_params(const HyperbolicSpaceSpec& h) {
  if (h.field_dim != 1 && h.field_dim != 2 && h.field_dim != 4)
    throw DomainError("field dimension must be 1, 2 or 4");
  if (h.k < 2) throw DomainError("hyperbolic dimension k must be >= 2");
  const double d = h.field_dim;
  return JacobiParams(d * h.k / 2.0 - 1.0, d / 2.0 - 1.0);
}

}  // namespace jacobi
