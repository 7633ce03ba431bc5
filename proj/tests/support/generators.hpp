#pragma once

#include "proxkit/convex_set.hpp"
#include "proxkit/linear_operator.hpp"
#include "proxkit/prox_function.hpp"
#include "proxkit/smooth_function.hpp"

#include <Eigen/QR>

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <vector>

namespace proxkit::testing {

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

inline Matrix mat(Index rows, Index cols, std::initializer_list<double> values) {
  Matrix m(rows, cols);
  auto it = values.begin();
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = *it++;
  return m;
}

/// Hand-rolled generator for property tests; every draw is reproducible
/// from the seed.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  Vector vector(Index n, double scale = 3.0) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = uniform(-scale, scale);
    return v;
  }

  Vector nonzero_vector(Index n, double scale = 3.0) {
    Vector v = vector(n, scale);
    while (v.norm() < 1e-3) v = vector(n, scale);
    return v;
  }

  Matrix matrix(Index rows, Index cols, double scale = 2.0) {
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r)
      for (Index c = 0; c < cols; ++c) m(r, c) = uniform(-scale, scale);
    return m;
  }

  LinearOperator op(Index rows, Index cols) { return LinearOperator(matrix(rows, cols)); }

  Matrix orthonormal(Index n) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd(matrix(n, n)));
    return Matrix(qr.householderQ());
  }

  static constexpr int kSetKinds = 9;

  ConvexSet set(Index n, int kind) {
    switch (kind) {
      case 0: return ConvexSet::whole_space(n);
      case 1: {
        Vector lo = vector(n);
        Vector hi = lo + vector(n, 1.0).cwiseAbs() + Vector::Constant(n, 0.1);
        return ConvexSet::box(lo, hi);
      }
      case 2: return ConvexSet::ball(vector(n), uniform(0.2, 2.0));
      case 3: return ConvexSet::halfspace(nonzero_vector(n), uniform(-1.0, 1.0));
      case 4: return ConvexSet::hyperplane(nonzero_vector(n), uniform(-1.0, 1.0));
      case 5: return ConvexSet::singleton(vector(n));
      case 6: {
        if (n < 2) return ConvexSet::hyperplane(nonzero_vector(n), uniform(-1.0, 1.0));
        const Index k = integer(1, static_cast<int>(n) - 1);
        return ConvexSet::affine(matrix(k, n), vector(k));
      }
      case 7: return ConvexSet::nonneg_orthant(n);
      default: {
        if (n < 2) return set(n, 1);
        const Index first = integer(1, static_cast<int>(n) - 1);
        return ConvexSet::product({set(first, integer(0, 7)), set(n - first, integer(0, 7))});
      }
    }
  }

  ConvexSet any_set(Index n) { return set(n, integer(0, kSetKinds - 1)); }

  static constexpr int kFunctionKinds = 10;

  /// One catalog member per kind index; composite kinds wrap simple bases.
  ProxFunction function(Index n, int kind) {
    switch (kind) {
      case 0: return ProxFunction::zero(n);
      case 1: return ProxFunction::indicator(any_set(n));
      case 2: return ProxFunction::l1(n);
      case 3: return ProxFunction::l1_plus_quadratic(n, uniform(0.1, 3.0));
      case 4: {
        std::vector<ProxFunction> parts;
        for (Index i = 0; i < n; ++i) parts.push_back(scalar_function());
        std::optional<Matrix> basis;
        if (coin()) basis = orthonormal(n);
        return ProxFunction::separable(parts, basis);
      }
      case 5: return ProxFunction::scaled(simple_function(n), uniform(0.2, 3.0));
      case 6: return ProxFunction::reflected_translated(simple_function(n), vector(n));
      case 7: return ProxFunction::support(any_set(n));
      case 8: return ProxFunction::conjugate(simple_function(n));
      default: {
        const Index m = integer(1, static_cast<int>(n) + 1);
        return ProxFunction::quadratic_data(op(m, n), vector(m));
      }
    }
  }

  ProxFunction any_function(Index n) { return function(n, integer(0, kFunctionKinds - 1)); }

  ProxFunction simple_function(Index n) {
    switch (integer(0, 4)) {
      case 0: return ProxFunction::zero(n);
      case 1: return ProxFunction::indicator(set(n, integer(0, 7)));
      case 2: return ProxFunction::l1(n);
      case 3: return ProxFunction::l1_plus_quadratic(n, uniform(0.1, 3.0));
      default: return ProxFunction::quadratic_data(op(n, n), vector(n));
    }
  }

  ProxFunction scalar_function() {
    switch (integer(0, 4)) {
      case 0: return ProxFunction::zero(1);
      case 1: return ProxFunction::l1(1);
      case 2: return ProxFunction::indicator(set(1, 1));
      case 3: return ProxFunction::l1_plus_quadratic(1, uniform(0.1, 2.0));
      default: return ProxFunction::scaled(ProxFunction::l1(1), uniform(0.2, 3.0));
    }
  }

  static constexpr int kSmoothKinds = 5;

  SmoothFunction smooth(Index n, int kind) {
    switch (kind) {
      case 0: return SmoothFunction::zero(n);
      case 1: {
        const Index m = integer(1, static_cast<int>(n) + 2);
        return SmoothFunction::least_squares(op(m, n), vector(m));
      }
      case 2: {
        std::vector<QuadraticTerm> terms;
        for (int k = integer(1, 3); k > 0; --k) {
          const Index m = integer(1, static_cast<int>(n) + 1);
          terms.push_back(QuadraticTerm{uniform(0.2, 2.0), op(m, n), vector(m)});
        }
        return SmoothFunction::multi_quadratic(terms);
      }
      case 3: {
        std::vector<EnvelopeTerm> terms;
        for (int k = integer(1, 3); k > 0; --k) {
          const Index m = integer(1, static_cast<int>(n) + 1);
          terms.push_back(EnvelopeTerm{uniform(0.2, 2.0), uniform(0.3, 2.0), op(m, n), simple_function(m)});
        }
        return SmoothFunction::envelope_sum(terms);
      }
      default: return SmoothFunction::quadratic_coupling(simple_function(n), vector(n), uniform(0.3, 2.0));
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace proxkit::testing
