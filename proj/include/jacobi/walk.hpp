#pragma once

// Step laws, compression, and Monte Carlo simulation of Jacobi random walks
// S_{m+1} ~ delta_{S_m} * nu_c started at S_0 = 0.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "jacobi/error.hpp"
#include "jacobi/hypergroup.hpp"
#include "jacobi/params.hpp"
#include "jacobi/quadrature.hpp"
#include "jacobi/random.hpp"
#include "jacobi/specfun.hpp"

namespace jacobi {

struct Atom {
  double point;
  double weight;
};

struct AtomsLaw {
  std::vector<Atom> atoms;
};

struct UniformLaw {
  double a;
  double b;
};

/// Exponential law with the given rate conditioned on [0, cap].
struct TruncatedExponentialLaw {
  double rate;
  double cap;
};

/// A probability measure on [0, inf) with an exact sampler.
class StepDistribution {
 public:
  using Law = std::variant<AtomsLaw, UniformLaw, TruncatedExponentialLaw>;

  static StepDistribution atoms(std::vector<Atom> atoms) {
    if (atoms.empty()) throw DomainError("atoms: at least one atom required");
    double total = 0.0;
    for (const auto& a : atoms) {
      if (!(a.point >= 0.0) || !std::isfinite(a.point))
        throw DomainError("atoms: points must be finite and >= 0");
      if (!(a.weight > 0.0) || !std::isfinite(a.weight))
        throw DomainError("atoms: weights must be positive");
      total += a.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      std::ostringstream os;
      os.precision(17);
      os << "atoms: weights sum to " << total << ", expected 1";
      throw DomainError(os.str());
    }
    return StepDistribution(AtomsLaw{std::move(atoms)});
  }

  static StepDistribution point_mass(double a) { return atoms({{a, 1.0}}); }

  static StepDistribution uniform(double a, double b) {
    if (!(a >= 0.0) || !(b > a) || !std::isfinite(b))
      throw DomainError("uniform: requires 0 <= a < b < inf");
    return StepDistribution(UniformLaw{a, b});
  }

  static StepDistribution truncated_exponential(double rate, double cap) {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("truncated_exponential: rate must be > 0");
    if (!(cap > 0.0) || !std::isfinite(cap)) throw DomainError("truncated_exponential: cap must be > 0");
    return StepDistribution(TruncatedExponentialLaw{rate, cap});
  }

  const Law& law() const noexcept { return law_; }

  std::string kind_name() const {
    return std::visit(
        [](const auto& l) -> std::string {
          using L = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<L, AtomsLaw>) return "atoms";
          else if constexpr (std::is_same_v<L, UniformLaw>) return "uniform";
          else return "truncated_exponential";
        },
        law_);
  }

  /// True when the law is delta_0.
  bool is_zero() const {
    if (const auto* a = std::get_if<AtomsLaw>(&law_))
      return std::all_of(a->atoms.begin(), a->atoms.end(), [](const Atom& x) { return x.point == 0.0; });
    return false;
  }

  /// Right end of the support.
  double support_max() const {
    return std::visit(
        [](const auto& l) -> double {
          using L = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<L, AtomsLaw>) {
            double m = 0.0;
            for (const auto& a : l.atoms) m = std::max(m, a.point);
            return m;
          } else if constexpr (std::is_same_v<L, UniformLaw>) {
            return l.b;
          } else {
            return l.cap;
          }
        },
        law_);
  }

 private:
  explicit StepDistribution(Law law) : law_(std::move(law)) {
    if (auto* a = std::get_if<AtomsLaw>(&law_)) {
      cumulative_.reserve(a->atoms.size());
      double c = 0.0;
      for (const auto& x : a->atoms) cumulative_.push_back(c += x.weight);
      cumulative_.back() = 1.0;
    }
  }

  Law law_;
  std::vector<double> cumulative_;

  friend double sample_step(const StepDistribution&, RandomSource&);
};

/// Image of nu under x -> c x.
inline StepDistribution compress(const StepDistribution& nu, double c) {
  if (!(c > 0.0 && c <= 1.0)) throw DomainError("compress: c must lie in (0, 1]");
  if (c == 1.0) return nu;
  return std::visit(
      [c](const auto& l) -> StepDistribution {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, AtomsLaw>) {
          auto atoms = l.atoms;
          for (auto& a : atoms) a.point *= c;
          return StepDistribution::atoms(std::move(atoms));
        } else if constexpr (std::is_same_v<L, UniformLaw>) {
          return StepDistribution::uniform(c * l.a, c * l.b);
        } else {
          return StepDistribution::truncated_exponential(l.rate / c, l.cap * c);
        }
      },
      nu.law());
}

/// One exact draw from nu: linear scan over the cumulative weights for
/// atoms, inverse CDF for the parametric laws.
inline double sample_step(const StepDistribution& nu, RandomSource& rng) {
  return std::visit(
      [&](const auto& l) -> double {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, AtomsLaw>) {
          if (l.atoms.size() == 1) return l.atoms.front().point;
          const double u = rng.uniform();
          const auto& cum = nu.cumulative_;
          const auto it = std::upper_bound(cum.begin(), cum.end(), u);
          const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
          return l.atoms[idx].point;
        } else if constexpr (std::is_same_v<L, UniformLaw>) {
          return l.a + (l.b - l.a) * rng.uniform();
        } else {
          // F(x) = (1 - e^{-rate x}) / (1 - e^{-rate cap})
          const double mass = -std::expm1(-l.rate * l.cap);
          return std::min(l.cap, -std::log1p(-rng.uniform() * mass) / l.rate);
        }
      },
      nu.law());
}

/// Raw moment E[X^l] in closed form.
inline double raw_moment(const StepDistribution& nu, int l) {
  if (l < 0) throw DomainError("raw_moment: order must be >= 0");
  return std::visit(
      [l](const auto& law) -> double {
        using L = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<L, AtomsLaw>) {
          double s = 0.0;
          for (const auto& a : law.atoms) s += a.weight * std::pow(a.point, l);
          return s;
        } else if constexpr (std::is_same_v<L, UniformLaw>) {
          const double k = l + 1.0;
          return (std::pow(law.b, k) - std::pow(law.a, k)) / (k * (law.b - law.a));
        } else {
          // E[X^l] = Gamma(l+1) P(l+1, rate cap) / (rate^l P(1, rate cap))
          const double x = law.rate * law.cap;
          return std::exp(std::lgamma(l + 1.0) - l * std::log(law.rate)) *
                 reg_lower_inc_gamma(l + 1.0, x) / reg_lower_inc_gamma(1.0, x);
        }
      },
      nu.law());
}

/// Integral of f against nu: exact for atoms, composite Gauss-Legendre for
/// the parametric laws (`order` nodes per panel).
template <class F>
double expect(const StepDistribution& nu, F&& f, int order = 32) {
  const auto gl = cached_gauss_jacobi(order, 0.0, 0.0);
  auto panels = [&](double lo, double hi, int count, auto&& density) {
    double sum = 0.0;
    const double width = (hi - lo) / count;
    for (int k = 0; k < count; ++k) {
      const double a = lo + k * width;
      for (std::size_t j = 0; j < gl->size(); ++j) {
        const double x = a + 0.5 * width * (1.0 + gl->nodes[j]);
        sum += gl->weights[j] * width * density(x) * f(x);
      }
    }
    return sum;
  };
  return std::visit(
      [&](const auto& l) -> double {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, AtomsLaw>) {
          double s = 0.0;
          for (const auto& a : l.atoms) s += a.weight * f(a.point);
          return s;
        } else if constexpr (std::is_same_v<L, UniformLaw>) {
          return panels(l.a, l.b, 4, [&](double) { return 1.0 / (l.b - l.a); });
        } else {
          const double mass = -std::expm1(-l.rate * l.cap);
          const int count = std::clamp(static_cast<int>(std::ceil(l.rate * l.cap / 2.0)), 4, 64);
          return panels(0.0, l.cap, count,
                        [&](double x) { return l.rate * std::exp(-l.rate * x) / mass; });
        }
      },
      nu.law());
}

/// Upper limit on walk positions. Convolution is evaluated in log space, so
/// positions far beyond the range of sh^2 stay exact; this guards only
/// against runaway configurations.
inline constexpr double kMaxWalkPosition = 1e7;

/// Full description of a walk experiment.
struct WalkConfig {
  JacobiParams params{0.5, -0.5};
  StepDistribution nu = StepDistribution::point_mass(1.0);
  double compression_exponent = 0.0;
  int steps = 1;
  int replicas = 1;
  std::uint64_t seed = 0;

  void validate() const {
    if (steps < 1) throw DomainError("walk: steps must be >= 1");
    if (replicas < 1) throw DomainError("walk: replicas must be >= 1");
    if (!(compression_exponent >= 0.0) || !std::isfinite(compression_exponent))
      throw DomainError("walk: compression exponent must be >= 0");
  }

  /// nu_{n^{-r}}, the step law actually used.
  StepDistribution step_law() const {
    return compress(nu, std::pow(static_cast<double>(steps), -compression_exponent));
  }
};

/// Execution options that do not affect results.
struct WalkOptions {
  unsigned threads = 0;  ///< 0 selects the available hardware parallelism
  bool record_paths = false;
  /// Extra step counts at which positions are also recorded. Only valid for
  /// r = 0, where the step law does not depend on the horizon.
  std::vector<int> checkpoints;
};

struct WalkResult {
  std::vector<double> finals;
  /// paths[i] holds S_0..S_n of replica i when paths were requested.
  std::vector<std::vector<double>> paths;
  /// checkpoint_positions[k][i] = S_{checkpoints[k]} of replica i.
  std::vector<std::vector<double>> checkpoint_positions;
};

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

namespace detail {

/// Run body(i) for i in [0, count) over a pool of workers. Work is handed
/// out in fixed blocks; results must be written to slot i so the outcome
/// does not depend on scheduling. The first exception is rethrown.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, count))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  constexpr std::size_t kBlock = 64;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t start = next.fetch_add(kBlock);
      if (start >= count || failed.load()) return;
      const std::size_t stop = std::min(count, start + kBlock);
      try {
        for (std::size_t i = start; i < stop; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

/// Simulate cfg.replicas independent walks of cfg.steps steps. Replica i
/// draws from RandomSource::for_stream(cfg.seed, i), so the output is
/// identical for every thread count.
inline WalkResult simulate_walk(const WalkConfig& cfg, const WalkOptions& options = {}) {
  cfg.validate();
  std::vector<int> checkpoints = options.checkpoints;
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  for (int c : checkpoints)
    if (c < 1 || c > cfg.steps) throw DomainError("walk: checkpoints must lie in [1, steps]");
  if (!checkpoints.empty() && cfg.compression_exponent != 0.0)
    throw DomainError("walk: checkpoints require compression exponent 0");
  const auto replicas = static_cast<std::size_t>(cfg.replicas);
  if (options.record_paths &&
      static_cast<double>(replicas) * (cfg.steps + 1.0) > 5e7)
    throw DomainError("walk: path recording limited to 5e7 stored positions");

  const StepDistribution law = cfg.step_law();
  WalkResult out;
  out.finals.assign(replicas, 0.0);
  if (options.record_paths) out.paths.assign(replicas, {});
  out.checkpoint_positions.assign(checkpoints.size(), std::vector<double>(replicas, 0.0));

  detail::parallel_for(replicas, resolve_threads(options.threads), [&](std::size_t i) {
    RandomSource rng = RandomSource::for_stream(cfg.seed, i);
    std::vector<double>* path = options.record_paths ? &out.paths[i] : nullptr;
    if (path) {
      path->reserve(static_cast<std::size_t>(cfg.steps) + 1);
      path->push_back(0.0);
    }
    double s = 0.0;
    std::size_t next_cp = 0;
    for (int m = 1; m <= cfg.steps; ++m) {
      const double step = sample_step(law, rng);
      s = convolve_sample(cfg.params, s, step, rng);
      if (!(s <= kMaxWalkPosition)) {
        std::ostringstream os;
        os << "walk: replica " << i << " left the supported range at step " << m << " (position " << s
           << ")";
        throw OverflowError(os.str());
      }
      if (path) path->push_back(s);
      if (next_cp < checkpoints.size() && checkpoints[next_cp] == m)
        out.checkpoint_positions[next_cp++][i] = s;
    }
    out.finals[i] = s;
  });
  return out;
}

}  // namespace jacobi
