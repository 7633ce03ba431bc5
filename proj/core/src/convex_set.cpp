#include "proxkit/convex_set.hpp"

#include "proxkit/detail/overloaded.hpp"
#include "proxkit/errors.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace proxkit {

using detail::overloaded;

namespace {

constexpr double kConeTol = 1e-9;

void require_nonzero_normal(const Vector& a) {
  require_finite(a, "normal vector");
  if (a.size() == 0 || a.squaredNorm() == 0.0) fail(ErrorKind::kInput, "normal vector must be nonzero");
}

}  // namespace

ConvexSet::ConvexSet(Kind kind, Index dim)
    : kind_(std::make_shared<const Kind>(std::move(kind))), dim_(dim) {}

ConvexSet ConvexSet::whole_space(Index dim) {
  if (dim <= 0) fail(ErrorKind::kInput, "whole_space dimension must be positive");
  return ConvexSet(WholeSpace{dim}, dim);
}

ConvexSet ConvexSet::box(Vector lo, Vector hi) {
  if (lo.size() == 0) fail(ErrorKind::kInput, "box must be nonempty-dimensional");
  require_dim(hi, lo.size(), "box upper bound");
  require_finite(lo, "box lower bound");
  require_finite(hi, "box upper bound");
  if ((lo.array() > hi.array()).any()) fail(ErrorKind::kInput, "box has lo > hi (empty set)");
  const Index n = lo.size();
  return ConvexSet(Box{std::move(lo), std::move(hi)}, n);
}

ConvexSet ConvexSet::ball(Vector center, double radius) {
  if (center.size() == 0) fail(ErrorKind::kInput, "ball must be nonempty-dimensional");
  require_finite(center, "ball center");
  if (!(radius >= 0.0) || !std::isfinite(radius)) fail(ErrorKind::kInput, "ball radius must be finite and >= 0");
  const Index n = center.size();
  return ConvexSet(Ball{std::move(center), radius}, n);
}

ConvexSet ConvexSet::halfspace(Vector a, double b) {
  require_nonzero_normal(a);
  if (!std::isfinite(b)) fail(ErrorKind::kInput, "halfspace offset must be finite");
  const Index n = a.size();
  return ConvexSet(Halfspace{std::move(a), b}, n);
}

ConvexSet ConvexSet::hyperplane(Vector a, double b) {
  require_nonzero_normal(a);
  if (!std::isfinite(b)) fail(ErrorKind::kInput, "hyperplane offset must be finite");
  const Index n = a.size();
  return ConvexSet(Hyperplane{std::move(a), b}, n);
}

ConvexSet ConvexSet::singleton(Vector point) {
  if (point.size() == 0) fail(ErrorKind::kInput, "singleton must be nonempty-dimensional");
  require_finite(point, "singleton point");
  const Index n = point.size();
  return ConvexSet(Singleton{std::move(point)}, n);
}

ConvexSet ConvexSet::affine(Matrix A, Vector c) {
  if (A.rows() == 0 || A.cols() == 0) fail(ErrorKind::kInput, "affine constraint matrix must be nonempty");
  require_dim(c, A.rows(), "affine right-hand side");
  require_finite(A, "affine constraint matrix");
  require_finite(c, "affine right-hand side");
  Eigen::ColPivHouseholderQR<Matrix> qr(A.transpose());
  if (qr.rank() < A.rows())
    fail(ErrorKind::kCapability, "affine constraint matrix is rank deficient; projection not supported");
  Matrix gram = A * A.transpose();
  Matrix gram_inverse = gram.ldlt().solve(Matrix::Identity(A.rows(), A.rows()));
  const Index n = A.cols();
  return ConvexSet(Affine{std::move(A), std::move(c), std::move(gram_inverse)}, n);
}

ConvexSet ConvexSet::nonneg_orthant(Index dim) {
  if (dim <= 0) fail(ErrorKind::kInput, "orthant dimension must be positive");
  return ConvexSet(NonnegOrthant{dim}, dim);
}

ConvexSet ConvexSet::product(std::vector<ConvexSet> parts) {
  if (parts.empty()) fail(ErrorKind::kInput, "product of zero sets");
  Index n = 0;
  for (const auto& p : parts) n += p.dim();
  return ConvexSet(Product{std::move(parts)}, n);
}

std::string_view ConvexSet::kind_name() const {
  return std::visit(overloaded{
                        [](const WholeSpace&) { return "whole_space"; },
                        [](const Box&) { return "box"; },
                        [](const Ball&) { return "ball"; },
                        [](const Halfspace&) { return "halfspace"; },
                        [](const Hyperplane&) { return "hyperplane"; },
                        [](const Singleton&) { return "singleton"; },
                        [](const Affine&) { return "affine"; },
                        [](const NonnegOrthant&) { return "nonneg_orthant"; },
                        [](const Product&) { return "product"; },
                    },
                    *kind_);
}

Vector ConvexSet::project(const Vector& x) const {
  require_dim(x, dim_, "point to project");
  return std::visit(
      overloaded{
          [&](const WholeSpace&) -> Vector { return x; },
          [&](const Box& s) -> Vector { return x.cwiseMax(s.lo).cwiseMin(s.hi); },
          [&](const Ball& s) -> Vector {
            const Vector d = x - s.center;
            const double n = d.norm();
            if (n <= s.radius) return x;
            return s.center + (s.radius / n) * d;
          },
          [&](const Halfspace& s) -> Vector {
            const double excess = s.a.dot(x) - s.b;
            if (excess <= 0.0) return x;
            return x - (excess / s.a.squaredNorm()) * s.a;
          },
          [&](const Hyperplane& s) -> Vector {
            return x - ((s.a.dot(x) - s.b) / s.a.squaredNorm()) * s.a;
          },
          [&](const Singleton& s) -> Vector { return s.point; },
          [&](const Affine& s) -> Vector {
            const Vector r = s.A * x - s.c;
            return x - s.A.transpose() * (s.gram_inverse * r);
          },
          [&](const NonnegOrthant&) -> Vector { return x.cwiseMax(0.0); },
          [&](const Product& s) -> Vector {
            Vector out(dim_);
            Index at = 0;
            for (const auto& part : s.parts) {
              out.segment(at, part.dim()) = part.project(x.segment(at, part.dim()));
              at += part.dim();
            }
            return out;
          },
      },
      *kind_);
}

double ConvexSet::residual(const Vector& x) const {
  require_dim(x, dim_, "point");
  return std::visit(
      overloaded{
          [&](const WholeSpace&) { return 0.0; },
          [&](const Box& s) {
            return std::max(0.0, std::max((s.lo - x).maxCoeff(), (x - s.hi).maxCoeff()));
          },
          [&](const Ball& s) { return std::max(0.0, (x - s.center).norm() - s.radius); },
          [&](const Halfspace& s) { return std::max(0.0, (s.a.dot(x) - s.b) / s.a.norm()); },
          [&](const Hyperplane& s) { return std::abs(s.a.dot(x) - s.b) / s.a.norm(); },
          [&](const Singleton& s) { return (x - s.point).norm(); },
          [&](const Affine& s) { return (s.A * x - s.c).norm(); },
          [&](const NonnegOrthant&) { return std::max(0.0, (-x).maxCoeff()); },
          [&](const Product& s) {
            double worst = 0.0;
            Index at = 0;
            for (const auto& part : s.parts) {
              worst = std::max(worst, part.residual(x.segment(at, part.dim())));
              at += part.dim();
            }
            return worst;
          },
      },
      *kind_);
}

Vector ConvexSet::witness() const {
  return std::visit(
      overloaded{
          [&](const WholeSpace& s) -> Vector { return Vector::Zero(s.dim); },
          [&](const Box& s) -> Vector { return 0.5 * (s.lo + s.hi); },
          [&](const Ball& s) -> Vector { return s.center; },
          [&](const Halfspace& s) -> Vector { return (s.b / s.a.squaredNorm()) * s.a; },
          [&](const Hyperplane& s) -> Vector { return (s.b / s.a.squaredNorm()) * s.a; },
          [&](const Singleton& s) -> Vector { return s.point; },
          [&](const Affine& s) -> Vector { return s.A.transpose() * (s.gram_inverse * s.c); },
          [&](const NonnegOrthant& s) -> Vector { return Vector::Zero(s.dim); },
          [&](const Product& s) -> Vector {
            Vector out(dim_);
            Index at = 0;
            for (const auto& part : s.parts) {
              out.segment(at, part.dim()) = part.witness();
              at += part.dim();
            }
            return out;
          },
      },
      *kind_);
}

bool ConvexSet::is_bounded() const {
  return std::visit(overloaded{
                        [](const Box&) { return true; },
                        [](const Ball&) { return true; },
                        [](const Singleton&) { return true; },
                        [](const Product& s) {
                          return std::all_of(s.parts.begin(), s.parts.end(),
                                             [](const ConvexSet& p) { return p.is_bounded(); });
                        },
                        [](const auto&) { return false; },
                    },
                    *kind_);
}

ExtendedReal ConvexSet::support(const Vector& v) const {
  require_dim(v, dim_, "support argument");
  const double slack = kConeTol * (1.0 + v.norm());
  // v must lie on the ray/line spanned by a.
  auto along = [&](const Vector& a, bool ray, double b) -> ExtendedReal {
    const double lambda = a.dot(v) / a.squaredNorm();
    if ((v - lambda * a).norm() > slack) return ExtendedReal::infinity();
    if (ray && lambda < -kConeTol) return ExtendedReal::infinity();
    return ray ? std::max(lambda, 0.0) * b : lambda * b;
  };
  return std::visit(
      overloaded{
          [&](const WholeSpace&) -> ExtendedReal {
            return v.norm() <= kConeTol ? ExtendedReal(0.0) : ExtendedReal::infinity();
          },
          [&](const Box& s) -> ExtendedReal {
            return s.lo.cwiseProduct(v).cwiseMax(s.hi.cwiseProduct(v)).sum();
          },
          [&](const Ball& s) -> ExtendedReal { return s.center.dot(v) + s.radius * v.norm(); },
          [&](const Halfspace& s) { return along(s.a, true, s.b); },
          [&](const Hyperplane& s) { return along(s.a, false, s.b); },
          [&](const Singleton& s) -> ExtendedReal { return s.point.dot(v); },
          [&](const Affine& s) -> ExtendedReal {
            const Vector lambda = s.gram_inverse * (s.A * v);
            if ((v - s.A.transpose() * lambda).norm() > slack) return ExtendedReal::infinity();
            return lambda.dot(s.c);
          },
          [&](const NonnegOrthant&) -> ExtendedReal {
            return v.maxCoeff() <= kConeTol ? ExtendedReal(0.0) : ExtendedReal::infinity();
          },
          [&](const Product& s) -> ExtendedReal {
            ExtendedReal total = 0.0;
            Index at = 0;
            for (const auto& part : s.parts) {
              total = total + part.support(v.segment(at, part.dim()));
              at += part.dim();
            }
            return total;
          },
      },
      *kind_);
}

}  // namespace proxkit
