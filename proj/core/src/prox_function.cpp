#include "proxkit/prox_function.hpp"

#include "proxkit/detail/overloaded.hpp"
#include "proxkit/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <cmath>
#include <sstream>

namespace proxkit {

using detail::overloaded;

namespace {

void require_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    fail(ErrorKind::kInput, "prox parameter gamma must be finite and > 0");
}

Vector scalar(double v) { return Vector::Constant(1, v); }

// Canonical coefficients <x, e_k>.
Vector coefficients(const ProxFunction::Separable& s, const Vector& x) {
  return s.basis ? Vector(s.basis->transpose() * x) : x;
}

Vector synthesize(const ProxFunction::Separable& s, const Vector& c) {
  return s.basis ? Vector(*s.basis * c) : c;
}

// A point in dom f^*.
Vector conjugate_feasible_point(const ProxFunction& f) {
  return std::visit(
      overloaded{
          [&](const ProxFunction::Support& s) -> Vector { return s.set.witness(); },
          [&](const ProxFunction::Conjugate& s) -> Vector { return s.base.feasible_point(); },
          [&](const ProxFunction::Scaled& s) -> Vector {
            return s.weight * conjugate_feasible_point(s.base);
          },
          [&](const ProxFunction::ReflectedTranslated& s) -> Vector {
            return -conjugate_feasible_point(s.base);
          },
          [&](const ProxFunction::Separable& s) -> Vector {
            Vector c(static_cast<Index>(s.components.size()));
            for (std::size_t k = 0; k < s.components.size(); ++k)
              c[static_cast<Index>(k)] = conjugate_feasible_point(s.components[k])[0];
            return synthesize(s, c);
          },
          [&](const auto&) -> Vector { return Vector::Zero(f.dim()); },
      },
      f.kind());
}

}  // namespace

Vector soft_threshold(const Vector& x, double threshold) {
  return x.unaryExpr([threshold](double xi) {
    const double m = std::abs(xi) - threshold;
    return m > 0.0 ? std::copysign(m, xi) : 0.0;
  });
}

ProxFunction::ProxFunction(Kind kind, Index dim)
    : kind_(std::make_shared<const Kind>(std::move(kind))), dim_(dim) {
  feasible_ = std::visit(
      overloaded{
          [&](const Indicator& s) -> Vector { return s.set.witness(); },
          [&](const Separable& s) -> Vector {
            Vector c(dim_);
            for (std::size_t k = 0; k < s.components.size(); ++k)
              c[static_cast<Index>(k)] = s.components[k].feasible_point()[0];
            return synthesize(s, c);
          },
          [&](const Scaled& s) -> Vector { return s.base.feasible_point(); },
          [&](const ReflectedTranslated& s) -> Vector { return s.z - s.base.feasible_point(); },
          [&](const Conjugate& s) -> Vector { return conjugate_feasible_point(s.base); },
          [&](const auto&) -> Vector { return Vector::Zero(dim_); },
      },
      *kind_);
}

ProxFunction ProxFunction::zero(Index dim) {
  if (dim <= 0) fail(ErrorKind::kInput, "dimension must be positive");
  return ProxFunction(Zero{dim}, dim);
}

ProxFunction ProxFunction::indicator(ConvexSet set) {
  const Index n = set.dim();
  return ProxFunction(Indicator{std::move(set)}, n);
}

ProxFunction ProxFunction::l1(Index dim) {
  if (dim <= 0) fail(ErrorKind::kInput, "dimension must be positive");
  return ProxFunction(L1{dim}, dim);
}

ProxFunction ProxFunction::l1_plus_quadratic(Index dim, double beta) {
  if (dim <= 0) fail(ErrorKind::kInput, "dimension must be positive");
  if (!(beta > 0.0) || !std::isfinite(beta)) fail(ErrorKind::kConfig, "l1_plus_quadratic needs beta > 0");
  return ProxFunction(L1PlusQuadratic{dim, beta}, dim);
}

ProxFunction ProxFunction::separable(std::vector<ProxFunction> components, std::optional<Matrix> basis) {
  if (components.empty()) fail(ErrorKind::kInput, "separable function needs components");
  for (const auto& c : components)
    if (c.dim() != 1) fail(ErrorKind::kCapability, "separable components must be one-dimensional");
  const Index n = static_cast<Index>(components.size());
  if (basis) {
    if (basis->rows() != n || basis->cols() != n)
      fail(ErrorKind::kInput, "separable basis must be square with one column per component");
    require_finite(*basis, "separable basis");
    const double defect = (basis->transpose() * *basis - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (defect > 1e-10) fail(ErrorKind::kInput, "separable basis is not orthonormal");
  }
  return ProxFunction(Separable{std::move(components), std::move(basis)}, n);
}

ProxFunction ProxFunction::scaled(ProxFunction base, double weight) {
  if (!(weight > 0.0) || !std::isfinite(weight)) fail(ErrorKind::kInput, "scale weight must be > 0");
  const Index n = base.dim();
  return ProxFunction(Scaled{std::move(base), weight}, n);
}

ProxFunction ProxFunction::reflected_translated(ProxFunction base, Vector z) {
  require_dim(z, base.dim(), "translation z");
  require_finite(z, "translation z");
  const Index n = base.dim();
  return ProxFunction(ReflectedTranslated{std::move(base), std::move(z)}, n);
}

ProxFunction ProxFunction::support(ConvexSet set) {
  const Index n = set.dim();
  return ProxFunction(Support{std::move(set)}, n);
}

ProxFunction ProxFunction::conjugate(ProxFunction base) {
  const Index n = base.dim();
  return ProxFunction(Conjugate{std::move(base)}, n);
}

ProxFunction ProxFunction::quadratic_data(LinearOperator L, Vector y) {
  require_dim(y, L.rows(), "data vector y");
  require_finite(y, "data vector y");
  Matrix gram = L.matrix().transpose() * L.matrix();
  const Index n = L.cols();
  return ProxFunction(QuadraticData{std::move(L), std::move(y), std::move(gram)}, n);
}

std::string_view ProxFunction::kind_name() const {
  return std::visit(overloaded{
                        [](const Zero&) { return "zero"; },
                        [](const Indicator&) { return "indicator"; },
                        [](const L1&) { return "l1"; },
                        [](const L1PlusQuadratic&) { return "l1_plus_quadratic"; },
                        [](const Separable&) { return "separable"; },
                        [](const Scaled&) { return "scaled"; },
                        [](const ReflectedTranslated&) { return "reflected_translated"; },
                        [](const Support&) { return "support"; },
                        [](const Conjugate&) { return "conjugate"; },
                        [](const QuadraticData&) { return "quadratic_data"; },
                    },
                    *kind_);
}

ExtendedReal ProxFunction::value(const Vector& x) const {
  require_dim(x, dim_, "argument of value");
  return std::visit(
      overloaded{
          [&](const Zero&) -> ExtendedReal { return 0.0; },
          [&](const Indicator& s) -> ExtendedReal {
            return s.set.contains(x) ? ExtendedReal(0.0) : ExtendedReal::infinity();
          },
          [&](const L1&) -> ExtendedReal { return x.lpNorm<1>(); },
          [&](const L1PlusQuadratic& s) -> ExtendedReal {
            return x.lpNorm<1>() + 0.5 * s.beta * x.squaredNorm();
          },
          [&](const Separable& s) -> ExtendedReal {
            const Vector c = coefficients(s, x);
            ExtendedReal total = 0.0;
            for (std::size_t k = 0; k < s.components.size(); ++k)
              total = total + s.components[k].value(scalar(c[static_cast<Index>(k)]));
            return total;
          },
          [&](const Scaled& s) -> ExtendedReal { return s.weight * s.base.value(x); },
          [&](const ReflectedTranslated& s) -> ExtendedReal { return s.base.value(s.z - x); },
          [&](const Support& s) -> ExtendedReal { return s.set.support(x); },
          [&](const Conjugate& s) -> ExtendedReal { return conjugate_value(s.base, x); },
          [&](const QuadraticData& s) -> ExtendedReal {
            return 0.5 * (s.L.apply(x) - s.y).squaredNorm();
          },
      },
      *kind_);
}

Vector ProxFunction::prox(double gamma, const Vector& x) const {
  require_gamma(gamma);
  require_dim(x, dim_, "argument of prox");
  return std::visit(
      overloaded{
          [&](const Zero&) -> Vector { return x; },
          [&](const Indicator& s) -> Vector { return s.set.project(x); },
          [&](const L1&) -> Vector { return soft_threshold(x, gamma); },
          [&](const L1PlusQuadratic& s) -> Vector {
            const double shrink = 1.0 + s.beta * gamma;
            return soft_threshold(x / shrink, gamma / shrink);
          },
          [&](const Separable& s) -> Vector {
            Vector c = coefficients(s, x);
            for (std::size_t k = 0; k < s.components.size(); ++k) {
              const auto i = static_cast<Index>(k);
              c[i] = s.components[k].prox(gamma, scalar(c[i]))[0];
            }
            return synthesize(s, c);
          },
          [&](const Scaled& s) -> Vector { return s.base.prox(gamma * s.weight, x); },
          [&](const ReflectedTranslated& s) -> Vector { return s.z - s.base.prox(gamma, s.z - x); },
          [&](const Support& s) -> Vector { return x - gamma * s.set.project(x / gamma); },
          [&](const Conjugate& s) -> Vector { return prox_conjugate(s.base, gamma, x); },
          [&](const QuadraticData& s) -> Vector {
            // (I + gamma L^T L) p = x + gamma L^T y
            Matrix system = gamma * s.gram;
            system.diagonal().array() += 1.0;
            const Vector rhs = x + gamma * s.L.adjoint_apply(s.y);
            return system.ldlt().solve(rhs);
          },
      },
      *kind_);
}

ExtendedReal conjugate_value(const ProxFunction& f, const Vector& u) {
  require_dim(u, f.dim(), "argument of conjugate value");
  using PF = ProxFunction;
  return std::visit(
      overloaded{
          [&](const PF::Zero&) -> ExtendedReal {
            return u.norm() <= kMembershipTol ? ExtendedReal(0.0) : ExtendedReal::infinity();
          },
          [&](const PF::Indicator& s) -> ExtendedReal { return s.set.support(u); },
          [&](const PF::L1&) -> ExtendedReal {
            return u.cwiseAbs().maxCoeff() <= 1.0 + kMembershipTol ? ExtendedReal(0.0)
                                                                  : ExtendedReal::infinity();
          },
          [&](const PF::L1PlusQuadratic& s) -> ExtendedReal {
            const Vector excess = (u.cwiseAbs().array() - 1.0).max(0.0).matrix();
            return excess.squaredNorm() / (2.0 * s.beta);
          },
          [&](const PF::Separable& s) -> ExtendedReal {
            const Vector c = coefficients(s, u);
            ExtendedReal total = 0.0;
            for (std::size_t k = 0; k < s.components.size(); ++k)
              total = total + conjugate_value(s.components[k], scalar(c[static_cast<Index>(k)]));
            return total;
          },
          [&](const PF::Scaled& s) -> ExtendedReal {
            return s.weight * conjugate_value(s.base, u / s.weight);
          },
          [&](const PF::ReflectedTranslated& s) -> ExtendedReal {
            return ExtendedReal(u.dot(s.z)) + conjugate_value(s.base, -u);
          },
          [&](const PF::Support& s) -> ExtendedReal {
            return s.set.contains(u) ? ExtendedReal(0.0) : ExtendedReal::infinity();
          },
          [&](const PF::Conjugate& s) -> ExtendedReal { return s.base.value(u); },
          [&](const PF::QuadraticData& s) -> ExtendedReal {
            // f^*(u) = ||r||^2/2 + <r, y> with r = L x - y and L^T r = u.
            const Vector rhs = u + s.L.adjoint_apply(s.y);
            const Vector x = s.gram.completeOrthogonalDecomposition().solve(rhs);
            const Vector r = s.L.apply(x) - s.y;
            if ((s.L.adjoint_apply(r) - u).norm() > 1e-9 * (1.0 + u.norm()))
              return ExtendedReal::infinity();
            return 0.5 * r.squaredNorm() + r.dot(s.y);
          },
      },
      f.kind());
}

ExtendedReal value(const ProxFunction& f, const Vector& x) { return f.value(x); }

Vector prox(const ProxFunction& f, double gamma, const Vector& x) { return f.prox(gamma, x); }

Vector prox_reflected_translated(const ProxFunction& ell, const Vector& z, double rho,
                                 const Vector& x) {
  require_dim(z, ell.dim(), "translation z");
  return z - ell.prox(rho, z - x);
}

Vector prox_conjugate(const ProxFunction& f, double gamma, const Vector& u) {
  require_gamma(gamma);
  return u - gamma * f.prox(1.0 / gamma, u / gamma);
}

double moreau_value(const ProxFunction& h, double rho, const Vector& x) {
  require_gamma(rho);
  const Vector p = h.prox(rho, x);
  const ExtendedReal hp = h.value(p);
  if (hp.is_infinite()) {
    // p is the prox output, so it lies in dom h up to the membership
    // tolerance; reaching here means the catalog broke that contract.
    fail(ErrorKind::kCapability, std::string("prox of ") + std::string(h.kind_name()) +
                                     " left the domain; envelope undefined");
  }
  return hp.value() + (x - p).squaredNorm() / (2.0 * rho);
}

Vector moreau_grad(const ProxFunction& h, double rho, const Vector& x) {
  require_gamma(rho);
  return (x - h.prox(rho, x)) / rho;
}

}  // namespace proxkit
