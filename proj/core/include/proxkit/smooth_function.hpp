#pragma once

#include "proxkit/linear_operator.hpp"
#include "proxkit/prox_function.hpp"
#include "proxkit/vector.hpp"

#include <memory>
#include <string_view>
#include <variant>
#include <vector>

namespace proxkit {

/// Weighted data term  (weight/2) ||L x - y||^2.
struct QuadraticTerm {
  double weight;
  LinearOperator L;
  Vector y;
};

/// Weighted Moreau envelope term  weight * (envelope of h with parameter rho)(L x).
struct EnvelopeTerm {
  double weight;
  double rho;
  LinearOperator L;
  ProxFunction h;
};

/// Differentiable convex function with a certified Lipschitz constant for
/// its gradient.
class SmoothFunction {
 public:
  struct Zero { Index dim; };
  struct LeastSquares { LinearOperator L; Vector y; };
  struct MultiQuadratic { std::vector<QuadraticTerm> terms; };
  struct EnvelopeSum { std::vector<EnvelopeTerm> terms; };

  using Kind = std::variant<Zero, LeastSquares, MultiQuadratic, EnvelopeSum>;

  static SmoothFunction zero(Index dim);
  /// ||L x - y||^2 / 2
  static SmoothFunction least_squares(LinearOperator L, Vector y);
  /// sum_k (w_k/2) ||L_k x - y_k||^2
  static SmoothFunction multi_quadratic(std::vector<QuadraticTerm> terms);
  /// sum_k w_k (envelope of h_k, rho_k)(L_k x)
  static SmoothFunction envelope_sum(std::vector<EnvelopeTerm> terms);
  /// x -> min_w ell(w) + ||x + w - z||^2 / (2 rho), represented as the
  /// envelope of y -> ell(z - y) with parameter rho.
  static SmoothFunction quadratic_coupling(ProxFunction ell, Vector z, double rho);

  Index dim() const { return dim_; }
  const Kind& kind() const { return *kind_; }
  std::string_view kind_name() const;

  double value(const Vector& x) const;
  Vector grad(const Vector& x) const;
  /// Formulaic Lipschitz constant of the gradient: ||L||^2 for least
  /// squares, sum w_k ||L_k||^2, sum w_k ||L_k||^2 / rho_k. Zero for the
  /// zero function. Computed once at construction.
  double lipschitz_beta() const { return beta_; }

 private:
  SmoothFunction(Kind kind, Index dim);

  std::shared_ptr<const Kind> kind_;
  Index dim_;
  double beta_ = 0.0;
};

double value(const SmoothFunction& g, const Vector& x);
Vector grad(const SmoothFunction& g, const Vector& x);
double lipschitz_beta(const SmoothFunction& g);

}  // namespace proxkit
