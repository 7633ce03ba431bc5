#pragma once

// Slow, independent verifiers. Nothing here calls the prox or projection
// code it is used to check; only function values, membership tests and
// set/function descriptions are read.

#include "proxkit/convex_set.hpp"
#include "proxkit/prox_function.hpp"
#include "proxkit/smooth_function.hpp"
#include "proxkit/vector.hpp"

#include <cstdint>
#include <functional>
#include <random>

namespace proxkit::oracle {

using Objective = std::function<double(const Vector&)>;

inline constexpr int kMaxGridDim = 3;
inline constexpr int kMaxGridResolution = 2001;
/// Grid points evaluated in the exhaustive pass, at most.
inline constexpr double kMaxGridPoints = 1e8;

struct GridResult {
  Vector point;
  double value = 0.0;
  double spacing = 0.0;  // coarse-grid spacing (largest over axes)
};

/// Exhaustive search over a resolution^d grid of [lo, hi], then one pass at
/// 10x finer spacing within one coarse cell of the incumbent. Ties go to the
/// lowest lexicographic grid index.
GridResult grid_minimize(const Objective& objective, const Vector& lo, const Vector& hi,
                         int resolution);

/// Coordinatewise minimizer of |x_i| + (a_i x_i - b_i)^2 / 2 by case analysis.
Vector subgradient_solve_separable_l1(const Vector& a, const Vector& b);

inline constexpr double kDefaultFdStep = 1e-6;

/// Central differences (g(x + h e_i) - g(x - h e_i)) / (2h).
Vector finite_diff_grad(const Objective& g, const Vector& x, double h = kDefaultFdStep);
Vector finite_diff_grad(const SmoothFunction& g, const Vector& x, double h = kDefaultFdStep);

/// Fixed default seed, overridden by the PROXKIT_SEED environment variable.
std::uint64_t default_seed();

inline constexpr double kInequalityTol = 1e-9;
inline constexpr int kMinAcceptedSamples = 50;

struct InequalityCheck {
  bool pass = false;
  /// max over samples of lhs - rhs; <= tolerance means pass.
  double worst_margin = 0.0;
  int accepted = 0;
  std::uint64_t seed = 0;
};

/// Samples competitors y in dom f and checks
///   <y - p, x - p> / gamma + f(p) <= f(y) + tol (1 + |f(p)| + |f(y)|).
/// At least max(samples, 50) feasible points are drawn from up to 10x as many
/// candidates, else a kSampling error.
InequalityCheck verify_prox_inequality(const ProxFunction& f, double gamma, const Vector& x,
                                       const Vector& p, int samples, std::uint64_t seed = default_seed());

/// p in C and <y - p, x - p> <= tol (1 + ||y - p|| ||x - p||) for sampled y in C.
InequalityCheck verify_projection_inequality(const ConvexSet& C, const Vector& x, const Vector& p,
                                             int samples, std::uint64_t seed = default_seed());

/// Sampler for points of C (uniform inside bounded kinds, a box around center
/// otherwise). Exposed for property tests.
class DomainSampler {
 public:
  explicit DomainSampler(std::uint64_t seed);

  Vector in_set(const ConvexSet& C, const Vector& center, double radius);
  /// Candidate point of dom f; callers still filter on f(y) < +inf.
  Vector in_domain(const ProxFunction& f, const Vector& center, double radius);
  Vector in_box(const Vector& center, double radius);
  Vector in_ball(const Vector& center, double radius);
  double uniform(double lo, double hi);

 private:
  Vector in_support_domain(const ConvexSet& D, const Vector& center, double radius);
  Vector in_conjugate_domain(const ProxFunction& f, const Vector& center, double radius);

  std::mt19937_64 rng_;
};

}  // namespace proxkit::oracle
