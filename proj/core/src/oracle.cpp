#include "proxkit/oracle.hpp"

#include "proxkit/detail/overloaded.hpp"
#include "proxkit/errors.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

namespace proxkit::oracle {

using detail::overloaded;

namespace {

struct Grid {
  Vector lo;
  Vector step;
  int points;
};

// Visits every grid point in lexicographic order (last axis fastest) and
// keeps the first strict minimum.
void scan(const Objective& objective, const Grid& grid, Vector& best, double& best_value) {
  const Index d = grid.lo.size();
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  Vector x(d);
  while (true) {
    for (Index i = 0; i < d; ++i) x[i] = grid.lo[i] + grid.step[i] * idx[static_cast<std::size_t>(i)];
    const double v = objective(x);
    if (v < best_value) {
      best_value = v;
      best = x;
    }
    Index axis = d - 1;
    while (axis >= 0) {
      auto& k = idx[static_cast<std::size_t>(axis)];
      if (++k < grid.points) break;
      k = 0;
      --axis;
    }
    if (axis < 0) return;
  }
}

}  // namespace

GridResult grid_minimize(const Objective& objective, const Vector& lo, const Vector& hi,
                         int resolution) {
  const Index d = lo.size();
  if (d < 1) fail(ErrorKind::kInput, "grid box must have at least one axis");
  if (d > kMaxGridDim) fail(ErrorKind::kCapability, "grid search is limited to dimension <= 3");
  require_dim(hi, d, "grid upper bound");
  require_finite(lo, "grid lower bound");
  require_finite(hi, "grid upper bound");
  if ((hi - lo).minCoeff() < 0.0) fail(ErrorKind::kInput, "grid box has lo > hi");
  if (resolution < 2 || resolution > kMaxGridResolution)
    fail(ErrorKind::kInput, "grid resolution must lie in [2, 2001]");
  if (std::pow(static_cast<double>(resolution), static_cast<double>(d)) > kMaxGridPoints)
    fail(ErrorKind::kCapability, "grid has more than 1e8 points; lower the resolution");

  const Vector step = (hi - lo) / static_cast<double>(resolution - 1);
  Vector best = lo;
  double best_value = std::numeric_limits<double>::infinity();
  scan(objective, Grid{lo, step, resolution}, best, best_value);
  if (!std::isfinite(best_value)) fail(ErrorKind::kDomain, "objective is +inf on the whole grid");

  // One cell either side of the incumbent at a tenth of the spacing.
  const Vector fine_lo = (best - step).cwiseMax(lo);
  const Vector fine_hi = (best + step).cwiseMin(hi);
  constexpr int kFinePoints = 21;
  scan(objective, Grid{fine_lo, (fine_hi - fine_lo) / (kFinePoints - 1), kFinePoints}, best,
       best_value);
  return {best, best_value, step.maxCoeff()};
}

Vector subgradient_solve_separable_l1(const Vector& a, const Vector& b) {
  require_dim(b, a.size(), "b");
  Vector x(a.size());
  for (Index i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) fail(ErrorKind::kCapability, "coefficient a_" + std::to_string(i) + " is zero");
    // 0 in a (a x - b) + d|x|
    const double ab = a[i] * b[i];
    const double a2 = a[i] * a[i];
    if (ab > 1.0)
      x[i] = (ab - 1.0) / a2;
    else if (ab < -1.0)
      x[i] = (ab + 1.0) / a2;
    else
      x[i] = 0.0;
  }
  return x;
}

Vector finite_diff_grad(const Objective& g, const Vector& x, double h) {
  if (!(h > 0.0)) fail(ErrorKind::kInput, "finite difference step must be > 0");
  Vector out(x.size());
  Vector e = x;
  for (Index i = 0; i < x.size(); ++i) {
    e[i] = x[i] + h;
    const double up = g(e);
    e[i] = x[i] - h;
    const double down = g(e);
    e[i] = x[i];
    out[i] = (up - down) / (2.0 * h);
  }
  return out;
}

Vector finite_diff_grad(const SmoothFunction& g, const Vector& x, double h) {
  return finite_diff_grad([&](const Vector& y) { return g.value(y); }, x, h);
}

std::uint64_t default_seed() {
  constexpr std::uint64_t kSeed = 0x5eed2024ULL;
  const char* env = std::getenv("PROXKIT_SEED");
  if (env == nullptr || *env == '\0') return kSeed;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') fail(ErrorKind::kConfig, std::string("PROXKIT_SEED is not an integer: ") + env);
  return static_cast<std::uint64_t>(v);
}

DomainSampler::DomainSampler(std::uint64_t seed) : rng_(seed) {}

double DomainSampler::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

Vector DomainSampler::in_box(const Vector& center, double radius) {
  Vector y(center.size());
  for (Index i = 0; i < y.size(); ++i) y[i] = center[i] + uniform(-radius, radius);
  return y;
}

Vector DomainSampler::in_ball(const Vector& center, double radius) {
  std::normal_distribution<double> normal;
  Vector dir(center.size());
  for (Index i = 0; i < dir.size(); ++i) dir[i] = normal(rng_);
  const double norm = dir.norm();
  if (norm == 0.0) return center;
  const double r = radius * std::pow(uniform(0.0, 1.0), 1.0 / static_cast<double>(center.size()));
  return center + (r / norm) * dir;
}

Vector DomainSampler::in_set(const ConvexSet& C, const Vector& center, double radius) {
  return std::visit(
      overloaded{
          [&](const ConvexSet::WholeSpace&) -> Vector { return in_box(center, radius); },
          [&](const ConvexSet::Box& s) -> Vector {
            Vector y(s.lo.size());
            for (Index i = 0; i < y.size(); ++i) y[i] = uniform(s.lo[i], s.hi[i]);
            return y;
          },
          [&](const ConvexSet::Ball& s) -> Vector { return in_ball(s.center, s.radius); },
          [&](const ConvexSet::Halfspace& s) -> Vector {
            // Reflect points of the far side through the boundary.
            Vector y = in_box(center, radius);
            const double excess = s.a.dot(y) - s.b;
            if (excess > 0.0) y -= (2.0 * excess / s.a.squaredNorm()) * s.a;
            return y;
          },
          [&](const ConvexSet::Hyperplane& s) -> Vector {
            Vector y = in_box(center, radius);
            return y - ((s.a.dot(y) - s.b) / s.a.squaredNorm()) * s.a;
          },
          [&](const ConvexSet::Singleton& s) -> Vector { return s.point; },
          [&](const ConvexSet::Affine& s) -> Vector {
            const Eigen::MatrixXd A = s.A;
            const Vector particular = A.completeOrthogonalDecomposition().solve(s.c);
            const Eigen::MatrixXd kernel = Eigen::FullPivLU<Eigen::MatrixXd>(A).kernel();
            if (kernel.cols() == 0 || kernel.norm() == 0.0) return particular;
            Vector w(kernel.cols());
            for (Index i = 0; i < w.size(); ++i) w[i] = uniform(-radius, radius);
            return particular + kernel * w;
          },
          [&](const ConvexSet::NonnegOrthant&) -> Vector {
            return (in_box(center, radius)).cwiseAbs();
          },
          [&](const ConvexSet::Product& s) -> Vector {
            Vector y(C.dim());
            Index offset = 0;
            for (const auto& part : s.parts) {
              const Index n = part.dim();
              y.segment(offset, n) = in_set(part, center.segment(offset, n), radius);
              offset += n;
            }
            return y;
          },
      },
      C.kind());
}

Vector DomainSampler::in_support_domain(const ConvexSet& D, const Vector& center, double radius) {
  const Index n = D.dim();
  return std::visit(
      overloaded{
          [&](const ConvexSet::WholeSpace&) -> Vector { return Vector::Zero(n); },
          [&](const ConvexSet::Box&) -> Vector { return in_box(center, radius); },
          [&](const ConvexSet::Ball&) -> Vector { return in_box(center, radius); },
          [&](const ConvexSet::Singleton&) -> Vector { return in_box(center, radius); },
          [&](const ConvexSet::Halfspace& s) -> Vector {
            return uniform(0.0, radius / s.a.norm()) * s.a;
          },
          [&](const ConvexSet::Hyperplane& s) -> Vector {
            return uniform(-radius, radius) / s.a.norm() * s.a;
          },
          [&](const ConvexSet::Affine& s) -> Vector {
            Vector w(s.A.rows());
            for (Index i = 0; i < w.size(); ++i) w[i] = uniform(-1.0, 1.0);
            return (radius / std::max(1.0, s.A.norm())) * (s.A.transpose() * w);
          },
          [&](const ConvexSet::NonnegOrthant&) -> Vector {
            return -(in_box(Vector::Zero(n), radius)).cwiseAbs();
          },
          [&](const ConvexSet::Product& s) -> Vector {
            Vector y(n);
            Index offset = 0;
            for (const auto& part : s.parts) {
              const Index m = part.dim();
              y.segment(offset, m) = in_support_domain(part, center.segment(offset, m), radius);
              offset += m;
            }
            return y;
          },
      },
      D.kind());
}

namespace {

template <class Draw>
Vector separable_draw(const ProxFunction::Separable& s, const Vector& center, Draw&& draw) {
  const Index n = static_cast<Index>(s.components.size());
  const Vector coords = s.basis ? Vector(s.basis->transpose() * center) : center;
  Vector c(n);
  for (Index k = 0; k < n; ++k)
    c[k] = draw(s.components[static_cast<std::size_t>(k)], Vector::Constant(1, coords[k]))[0];
  return s.basis ? Vector(*s.basis * c) : c;
}

}  // namespace

Vector DomainSampler::in_domain(const ProxFunction& f, const Vector& center, double radius) {
  auto recurse = [&](const ProxFunction& g, const Vector& c) { return in_domain(g, c, radius); };
  return std::visit(
      overloaded{
          [&](const ProxFunction::Zero&) -> Vector { return in_box(center, radius); },
          [&](const ProxFunction::L1&) -> Vector { return in_box(center, radius); },
          [&](const ProxFunction::L1PlusQuadratic&) -> Vector { return in_box(center, radius); },
          [&](const ProxFunction::QuadraticData&) -> Vector { return in_box(center, radius); },
          [&](const ProxFunction::Indicator& s) -> Vector { return in_set(s.set, center, radius); },
          [&](const ProxFunction::Separable& s) -> Vector { return separable_draw(s, center, recurse); },
          [&](const ProxFunction::Scaled& s) -> Vector { return in_domain(s.base, center, radius); },
          [&](const ProxFunction::ReflectedTranslated& s) -> Vector {
            // dom = z - dom base
            return s.z - in_domain(s.base, s.z - center, radius);
          },
          [&](const ProxFunction::Support& s) -> Vector {
            return in_support_domain(s.set, center, radius);
          },
          [&](const ProxFunction::Conjugate& s) -> Vector {
            return in_conjugate_domain(s.base, center, radius);
          },
      },
      f.kind());
}

Vector DomainSampler::in_conjugate_domain(const ProxFunction& f, const Vector& center, double radius) {
  const Index n = f.dim();
  auto recurse = [&](const ProxFunction& g, const Vector& c) { return in_conjugate_domain(g, c, radius); };
  return std::visit(
      overloaded{
          [&](const ProxFunction::Zero&) -> Vector { return Vector::Zero(n); },
          [&](const ProxFunction::L1&) -> Vector { return in_box(Vector::Zero(n), 1.0); },
          [&](const ProxFunction::L1PlusQuadratic&) -> Vector { return in_box(center, radius); },
          [&](const ProxFunction::QuadraticData& s) -> Vector {
            // dom f^* = range L^T
            Vector w(s.L.rows());
            for (Index i = 0; i < w.size(); ++i) w[i] = uniform(-1.0, 1.0);
            const Matrix& M = s.L.matrix();
            return (radius / std::max(1.0, M.norm())) * Vector(M.transpose() * w);
          },
          [&](const ProxFunction::Indicator& s) -> Vector {
            return in_support_domain(s.set, center, radius);
          },
          [&](const ProxFunction::Separable& s) -> Vector { return separable_draw(s, center, recurse); },
          [&](const ProxFunction::Scaled& s) -> Vector {
            // (w f)^*(u) = w f^*(u / w)
            return s.weight * in_conjugate_domain(s.base, center / s.weight, radius / s.weight);
          },
          [&](const ProxFunction::ReflectedTranslated& s) -> Vector {
            // (f(z - .))^*(u) = <u, z> + f^*(-u)
            return -in_conjugate_domain(s.base, -center, radius);
          },
          [&](const ProxFunction::Support& s) -> Vector { return in_set(s.set, center, radius); },
          [&](const ProxFunction::Conjugate& s) -> Vector { return in_domain(s.base, center, radius); },
      },
      f.kind());
}

namespace {

double tolerance(double fp, double fy) { return kInequalityTol * (1.0 + std::abs(fp) + std::abs(fy)); }

}  // namespace

namespace {

// Deterministic competitors p +- s e_i and p +- s (x - p)/||x - p|| at
// geometric scales; random draws rarely land in thin descent cones at kinks.
std::vector<Vector> axis_probes(const Vector& x, const Vector& p, double base) {
  std::vector<Vector> out;
  std::vector<Vector> directions;
  for (Index i = 0; i < p.size(); ++i) directions.push_back(Vector::Unit(p.size(), i));
  if ((x - p).norm() > 0.0) directions.push_back((x - p).normalized());
  for (int k = 1; k <= 5; ++k) {
    const double s = base * std::pow(10.0, -k);
    for (const Vector& d : directions) {
      out.push_back(p + s * d);
      out.push_back(p - s * d);
    }
  }
  return out;
}

}  // namespace

InequalityCheck verify_prox_inequality(const ProxFunction& f, double gamma, const Vector& x,
                                       const Vector& p, int samples, std::uint64_t seed) {
  if (!(gamma > 0.0)) fail(ErrorKind::kInput, "gamma must be > 0");
  require_dim(x, f.dim(), "point x");
  require_dim(p, f.dim(), "claimed prox p");
  InequalityCheck out;
  out.seed = seed;
  const double fp = f.value(p).value();
  if (!std::isfinite(fp)) {
    out.worst_margin = std::numeric_limits<double>::infinity();
    return out;
  }

  const int wanted = std::max(samples, kMinAcceptedSamples);
  const int budget = 10 * wanted;
  // Competitors at three scales around p, plus a wide cloud around x.
  const double base = 2.0 * (1.0 + (x - p).norm() + p.norm());
  DomainSampler sampler(seed);
  out.worst_margin = -std::numeric_limits<double>::infinity();
  bool violated = false;
  for (const Vector& y : axis_probes(x, p, base)) {
    const double fy = f.value(y).value();
    if (!std::isfinite(fy)) continue;
    const double margin = (y - p).dot(x - p) / gamma + fp - fy;
    out.worst_margin = std::max(out.worst_margin, margin);
    if (margin > tolerance(fp, fy)) violated = true;
  }
  for (int draw = 0; draw < budget && out.accepted < wanted; ++draw) {
    const int scale = draw % 4;
    const Vector& center = scale == 3 ? x : p;
    const double radius = scale == 3 ? base : base * std::pow(10.0, -scale);
    const Vector y = sampler.in_domain(f, center, radius);
    const double fy = f.value(y).value();
    if (!std::isfinite(fy)) continue;
    ++out.accepted;
    const double margin = (y - p).dot(x - p) / gamma + fp - fy;
    out.worst_margin = std::max(out.worst_margin, margin);
    if (margin > tolerance(fp, fy)) violated = true;
  }
  if (out.accepted < kMinAcceptedSamples)
    fail(ErrorKind::kSampling, "only " + std::to_string(out.accepted) + " feasible samples found for " +
                                   std::string(f.kind_name()));
  out.pass = !violated;
  return out;
}

InequalityCheck verify_projection_inequality(const ConvexSet& C, const Vector& x, const Vector& p,
                                             int samples, std::uint64_t seed) {
  require_dim(x, C.dim(), "point x");
  require_dim(p, C.dim(), "claimed projection p");
  InequalityCheck out;
  out.seed = seed;
  if (!C.contains(p)) {
    out.worst_margin = std::numeric_limits<double>::infinity();
    return out;
  }
  const int wanted = std::max(samples, kMinAcceptedSamples);
  const int budget = 10 * wanted;
  const double base = 2.0 * (1.0 + (x - p).norm() + p.norm());
  DomainSampler sampler(seed);
  out.worst_margin = -std::numeric_limits<double>::infinity();
  bool violated = false;
  for (const Vector& y : axis_probes(x, p, base)) {
    if (!C.contains(y)) continue;
    const double margin = (y - p).dot(x - p);
    out.worst_margin = std::max(out.worst_margin, margin);
    if (margin > kInequalityTol * (1.0 + (y - p).norm() * (x - p).norm())) violated = true;
  }
  for (int draw = 0; draw < budget && out.accepted < wanted; ++draw) {
    const int scale = draw % 4;
    const Vector& center = scale == 3 ? x : p;
    const double radius = scale == 3 ? base : base * std::pow(10.0, -scale);
    const Vector y = sampler.in_set(C, center, radius);
    if (!C.contains(y)) continue;
    ++out.accepted;
    const double margin = (y - p).dot(x - p);
    out.worst_margin = std::max(out.worst_margin, margin);
    if (margin > kInequalityTol * (1.0 + (y - p).norm() * (x - p).norm())) violated = true;
  }
  if (out.accepted < kMinAcceptedSamples)
    fail(ErrorKind::kSampling, "only " + std::to_string(out.accepted) + " feasible samples found in " +
                                   std::string(C.kind_name()));
  out.pass = !violated;
  return out;
}

}  // namespace proxkit::oracle
