#pragma once

#include "proxkit/vector.hpp"

#include <memory>
#include <optional>

namespace proxkit {

/// Result of a power-iteration norm estimate.
struct NormEstimate {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;  // false: value is the last Rayleigh estimate inflated by 1%
  bool exact = false;      // true: closed form (identity, diagonal, sum operator)
};

/// Dense real linear operator H -> G with adjoint (transpose) and a cached
/// operator-norm estimate. Immutable after construction; copies share the
/// norm cache, which is written at most once under a mutex.
class LinearOperator {
 public:
  static constexpr double kDefaultNormTol = 1e-9;
  static constexpr int kDefaultNormMaxIter = 10000;

  explicit LinearOperator(Matrix entries);

  static LinearOperator identity(Index n);
  static LinearOperator scaled_identity(Index n, double scale);
  static LinearOperator diagonal(const Vector& d);
  /// (x_1, ..., x_m) -> x_1 + ... + x_m on the product of m copies of R^dim.
  static LinearOperator sum_operator(Index m, Index dim);
  /// Single-row operator x -> <a, x>.
  static LinearOperator row(const Vector& a);

  Index rows() const { return entries_.rows(); }
  Index cols() const { return entries_.cols(); }
  const Matrix& matrix() const { return entries_; }

  Vector apply(const Vector& x) const;
  Vector adjoint_apply(const Vector& u) const;

  bool is_zero() const { return is_zero_; }

  /// Cached value if a norm has been computed or is known in closed form.
  std::optional<NormEstimate> cached_norm() const;

  /// Operator norm by power iteration on L*L. Closed forms short-circuit.
  /// Throws kZeroOperator for the zero operator.
  NormEstimate estimate_norm(double tol = kDefaultNormTol,
                             int max_iter = kDefaultNormMaxIter) const;

  /// Upper bound on ||L|| suitable for step-size constants: exact when known,
  /// otherwise the estimate inflated by a relative margin of 1e-6.
  double norm_bound() const;

 private:
  struct NormCache;

  Matrix entries_;
  bool is_zero_ = false;
  std::shared_ptr<NormCache> cache_;
};

Vector apply(const LinearOperator& L, const Vector& x);
Vector adjoint_apply(const LinearOperator& L, const Vector& u);
double operator_norm(const LinearOperator& L, double tol = LinearOperator::kDefaultNormTol,
                     int max_iter = LinearOperator::kDefaultNormMaxIter);
LinearOperator sum_operator(Index m, Index space_dim);

}  // namespace proxkit
