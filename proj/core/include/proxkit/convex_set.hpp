#pragma once

#include "proxkit/extended_real.hpp"
#include "proxkit/vector.hpp"

#include <memory>
#include <string_view>
#include <variant>
#include <vector>

namespace proxkit {

/// Absolute tolerance on a set's defining residual for membership tests.
inline constexpr double kMembershipTol = 1e-9;

/// Nonempty closed convex subset of R^n drawn from a closed catalog. Every
/// kind has a closed-form projection and a computable witness point.
class ConvexSet {
 public:
  struct WholeSpace { Index dim; };
  struct Box { Vector lo, hi; };
  struct Ball { Vector center; double radius; };
  struct Halfspace { Vector a; double b; };   // <a, x> <= b
  struct Hyperplane { Vector a; double b; };  // <a, x> == b
  struct Singleton { Vector point; };
  struct Affine {
    Matrix A;
    Vector c;
    Matrix gram_inverse;  // (A A^T)^{-1}; A has full row rank
  };
  struct NonnegOrthant { Index dim; };
  struct Product { std::vector<ConvexSet> parts; };

  using Kind = std::variant<WholeSpace, Box, Ball, Halfspace, Hyperplane, Singleton, Affine,
                            NonnegOrthant, Product>;

  static ConvexSet whole_space(Index dim);
  static ConvexSet box(Vector lo, Vector hi);
  static ConvexSet ball(Vector center, double radius);
  static ConvexSet halfspace(Vector a, double b);
  static ConvexSet hyperplane(Vector a, double b);
  static ConvexSet singleton(Vector point);
  /// {x : A x = c}. Rank-deficient A is a capability error.
  static ConvexSet affine(Matrix A, Vector c);
  static ConvexSet nonneg_orthant(Index dim);
  static ConvexSet product(std::vector<ConvexSet> parts);

  Index dim() const { return dim_; }
  const Kind& kind() const { return *kind_; }
  std::string_view kind_name() const;

  Vector project(const Vector& x) const;
  /// Defining residual: 0 inside, positive outside (distance-like).
  double residual(const Vector& x) const;
  bool contains(const Vector& x, double tol = kMembershipTol) const { return residual(x) <= tol; }
  Vector witness() const;
  bool is_bounded() const;
  /// sigma_C(v) = sup_{y in C} <y, v>.
  ExtendedReal support(const Vector& v) const;

 private:
  ConvexSet(Kind kind, Index dim);

  std::shared_ptr<const Kind> kind_;
  Index dim_;
};

inline Vector project(const ConvexSet& C, const Vector& x) { return C.project(x); }

}  // namespace proxkit
