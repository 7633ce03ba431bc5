#pragma once

#include "proxkit/convex_set.hpp"
#include "proxkit/extended_real.hpp"
#include "proxkit/linear_operator.hpp"
#include "proxkit/vector.hpp"

#include <memory>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

namespace proxkit {

/// Proper lower semicontinuous convex function R^n -> ]-inf, +inf] from a
/// closed catalog, exposing its value and its proximity operator
///
///   prox_{gamma f}(x) = argmin_p  f(p) + ||x - p||^2 / (2 gamma).
///
/// Values are immutable and cheap to copy (shared representation).
class ProxFunction {
 public:
  struct Zero;
  struct Indicator;
  struct L1;
  struct L1PlusQuadratic;
  struct Separable;
  struct Scaled;
  struct ReflectedTranslated;
  struct Support;
  struct Conjugate;
  struct QuadraticData;

  using Kind = std::variant<Zero, Indicator, L1, L1PlusQuadratic, Separable, Scaled,
                            ReflectedTranslated, Support, Conjugate, QuadraticData>;

  static ProxFunction zero(Index dim);
  static ProxFunction indicator(ConvexSet set);
  static ProxFunction l1(Index dim);
  /// ||x||_1 + (beta/2) ||x||^2
  static ProxFunction l1_plus_quadratic(Index dim, double beta);
  /// x -> sum_k phi_k(<x, e_k>) with one-dimensional phi_k. Without a basis
  /// the canonical basis is used; a basis is given as a square matrix whose
  /// columns e_k are orthonormal (checked to 1e-10).
  static ProxFunction separable(std::vector<ProxFunction> components,
                                std::optional<Matrix> basis = std::nullopt);
  /// weight * base, weight > 0
  static ProxFunction scaled(ProxFunction base, double weight);
  /// y -> base(z - y)
  static ProxFunction reflected_translated(ProxFunction base, Vector z);
  /// sigma_D(x) = sup_{y in D} <x, y>
  static ProxFunction support(ConvexSet set);
  /// Fenchel conjugate base^*
  static ProxFunction conjugate(ProxFunction base);
  /// x -> ||L x - y||^2 / 2
  static ProxFunction quadratic_data(LinearOperator L, Vector y);

  Index dim() const { return dim_; }
  const Kind& kind() const;
  std::string_view kind_name() const;

  ExtendedReal value(const Vector& x) const;
  Vector prox(double gamma, const Vector& x) const;
  /// A point with finite value, fixed at construction.
  const Vector& feasible_point() const { return feasible_; }

 private:
  ProxFunction(Kind kind, Index dim);

  std::shared_ptr<const Kind> kind_;
  Index dim_;
  Vector feasible_;
};

struct ProxFunction::Zero { Index dim; };
struct ProxFunction::Indicator { ConvexSet set; };
struct ProxFunction::L1 { Index dim; };
struct ProxFunction::L1PlusQuadratic { Index dim; double beta; };
struct ProxFunction::Separable {
  std::vector<ProxFunction> components;
  std::optional<Matrix> basis;
};
struct ProxFunction::Scaled { ProxFunction base; double weight; };
struct ProxFunction::ReflectedTranslated { ProxFunction base; Vector z; };
struct ProxFunction::Support { ConvexSet set; };
struct ProxFunction::Conjugate { ProxFunction base; };
struct ProxFunction::QuadraticData {
  LinearOperator L;
  Vector y;
  Matrix gram;  // L^T L
};

inline const ProxFunction::Kind& ProxFunction::kind() const { return *kind_; }

/// sign(xi) max(|xi| - threshold, 0), componentwise.
Vector soft_threshold(const Vector& x, double threshold);

ExtendedReal value(const ProxFunction& f, const Vector& x);
Vector prox(const ProxFunction& f, double gamma, const Vector& x);

/// prox of h: y -> ell(z - y), i.e. z - prox_{rho ell}(z - x).
Vector prox_reflected_translated(const ProxFunction& ell, const Vector& z, double rho,
                                 const Vector& x);

/// prox_{gamma f^*}(u) = u - gamma prox_{f/gamma}(u / gamma) (Moreau decomposition).
Vector prox_conjugate(const ProxFunction& f, double gamma, const Vector& u);

/// Value of the Fenchel conjugate f^*(u), closed form per kind.
ExtendedReal conjugate_value(const ProxFunction& f, const Vector& u);

/// Moreau envelope value h(p) + ||x - p||^2 / (2 rho), p = prox_{rho h}(x).
double moreau_value(const ProxFunction& h, double rho, const Vector& x);

/// Gradient of the Moreau envelope, (x - prox_{rho h}(x)) / rho.
Vector moreau_grad(const ProxFunction& h, double rho, const Vector& x);

}  // namespace proxkit
