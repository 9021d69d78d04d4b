#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace jacobi {

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Owned random stream. Variate generation is implemented here rather than
/// through <random> distributions so results are identical across standard
/// library implementations.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Stream for replica `index` of an experiment seeded with `seed`.
  static RandomSource for_stream(std::uint64_t seed, std::uint64_t index) {
    return RandomSource(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
  }

  /// Uniform on the open interval (0, 1).
  double uniform() noexcept {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  /// Gamma(shape, 1) by Marsaglia-Tsang squeeze/rejection.
  double gamma(double shape) noexcept {
    if (shape < 1.0) {
      const double g = gamma(shape + 1.0);
      return g * std::pow(uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  /// Beta(a, b) from two Gamma draws, with exact closed forms when a or b is 1
  /// and for the arcsine law a = b = 1/2.
  double beta(double a, double b) noexcept {
    if (a == 1.0) return -std::expm1(std::log(uniform()) / b);
    if (b == 1.0) return std::pow(uniform(), 1.0 / a);
    if (a == 0.5 && b == 0.5) {
      const double s = std::sin(0.5 * std::numbers::pi * uniform());
      return s * s;
    }
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace jacobi
