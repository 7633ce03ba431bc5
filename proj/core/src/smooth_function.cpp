#include "proxkit/smooth_function.hpp"

#include "proxkit/detail/overloaded.hpp"
#include "proxkit/errors.hpp"

#include <cmath>
#include <sstream>

namespace proxkit {

using detail::overloaded;

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorKind::kConfig, std::string(what) + " must be > 0");
}

void require_nonzero(const LinearOperator& L) {
  if (L.is_zero()) fail(ErrorKind::kZeroOperator, "smooth term built on a zero operator");
}

double squared_bound(const LinearOperator& L) {
  const double n = L.norm_bound();
  return n * n;
}

}  // namespace

SmoothFunction::SmoothFunction(Kind kind, Index dim)
    : kind_(std::make_shared<const Kind>(std::move(kind))),
      dim_(dim) {
  beta_ = std::visit(
      overloaded{
          [&](const Zero&) { return 0.0; },
          [&](const LeastSquares& s) { return squared_bound(s.L); },
          [&](const MultiQuadratic& s) {
            double total = 0.0;
            for (const auto& t : s.terms) total += t.weight * squared_bound(t.L);
            return total;
          },
          [&](const EnvelopeSum& s) {
            double total = 0.0;
            for (const auto& t : s.terms) total += t.weight * squared_bound(t.L) / t.rho;
            return total;
          },
      },
      *kind_);
}

SmoothFunction SmoothFunction::zero(Index dim) {
  if (dim <= 0) fail(ErrorKind::kInput, "dimension must be positive");
  return SmoothFunction(Zero{dim}, dim);
}

SmoothFunction SmoothFunction::least_squares(LinearOperator L, Vector y) {
  require_nonzero(L);
  require_dim(y, L.rows(), "least-squares data y");
  require_finite(y, "least-squares data y");
  const Index n = L.cols();
  return SmoothFunction(LeastSquares{std::move(L), std::move(y)}, n);
}

SmoothFunction SmoothFunction::multi_quadratic(std::vector<QuadraticTerm> terms) {
  if (terms.empty()) fail(ErrorKind::kConfig, "multi_quadratic needs at least one term");
  const Index n = terms.front().L.cols();
  for (const auto& t : terms) {
    require_positive(t.weight, "quadratic weight");
    require_nonzero(t.L);
    if (t.L.cols() != n) fail(ErrorKind::kInput, "quadratic terms act on different spaces");
    require_dim(t.y, t.L.rows(), "quadratic data y_k");
    require_finite(t.y, "quadratic data y_k");
  }
  return SmoothFunction(MultiQuadratic{std::move(terms)}, n);
}

SmoothFunction SmoothFunction::envelope_sum(std::vector<EnvelopeTerm> terms) {
  if (terms.empty()) fail(ErrorKind::kConfig, "envelope_sum needs at least one term");
  const Index n = terms.front().L.cols();
  for (const auto& t : terms) {
    require_positive(t.weight, "envelope weight");
    require_positive(t.rho, "envelope parameter rho");
    require_nonzero(t.L);
    if (t.L.cols() != n) fail(ErrorKind::kInput, "envelope terms act on different spaces");
    if (t.L.rows() != t.h.dim()) fail(ErrorKind::kInput, "envelope term: L_k range does not match h_k");
  }
  return SmoothFunction(EnvelopeSum{std::move(terms)}, n);
}

SmoothFunction SmoothFunction::quadratic_coupling(ProxFunction ell, Vector z, double rho) {
  const Index n = ell.dim();
  return envelope_sum({EnvelopeTerm{1.0, rho, LinearOperator::identity(n),
                                    ProxFunction::reflected_translated(std::move(ell), std::move(z))}});
}

std::string_view SmoothFunction::kind_name() const {
  return std::visit(overloaded{
                        [](const Zero&) { return "zero"; },
                        [](const LeastSquares&) { return "least_squares"; },
                        [](const MultiQuadratic&) { return "multi_quadratic"; },
                        [](const EnvelopeSum&) { return "envelope_sum"; },
                    },
                    *kind_);
}

double SmoothFunction::value(const Vector& x) const {
  require_dim(x, dim_, "argument of smooth value");
  return std::visit(
      overloaded{
          [&](const Zero&) { return 0.0; },
          [&](const LeastSquares& s) { return 0.5 * (s.L.apply(x) - s.y).squaredNorm(); },
          [&](const MultiQuadratic& s) {
            double total = 0.0;
            for (const auto& t : s.terms) total += 0.5 * t.weight * (t.L.apply(x) - t.y).squaredNorm();
            return total;
          },
          [&](const EnvelopeSum& s) {
            double total = 0.0;
            for (const auto& t : s.terms) total += t.weight * moreau_value(t.h, t.rho, t.L.apply(x));
            return total;
          },
      },
      *kind_);
}

Vector SmoothFunction::grad(const Vector& x) const {
  require_dim(x, dim_, "argument of gradient");
  return std::visit(
      overloaded{
          [&](const Zero&) -> Vector { return Vector::Zero(dim_); },
          [&](const LeastSquares& s) -> Vector { return s.L.adjoint_apply(s.L.apply(x) - s.y); },
          [&](const MultiQuadratic& s) -> Vector {
            Vector total = Vector::Zero(dim_);
            for (const auto& t : s.terms) total += t.weight * t.L.adjoint_apply(t.L.apply(x) - t.y);
            return total;
          },
          [&](const EnvelopeSum& s) -> Vector {
            // sum_k (w_k / rho_k) L_k^* (L_k x - prox_{rho_k h_k}(L_k x)), in index order
            Vector total = Vector::Zero(dim_);
            for (const auto& t : s.terms) {
              const Vector lx = t.L.apply(x);
              total += (t.weight / t.rho) * t.L.adjoint_apply(lx - t.h.prox(t.rho, lx));
            }
            return total;
          },
      },
      *kind_);
}

double value(const SmoothFunction& g, const Vector& x) { return g.value(x); }
Vector grad(const SmoothFunction& g, const Vector& x) { return g.grad(x); }
double lipschitz_beta(const SmoothFunction& g) { return g.lipschitz_beta(); }

}  // namespace proxkit
