#include "proxkit/problems.hpp"

#include "proxkit/errors.hpp"
#include "proxkit/oracle.hpp"
#include "test_support.hpp"

#include <Eigen/LU>

#include <cmath>
#include <functional>

namespace proxkit {
namespace {

using testing::Gen;
using testing::mat;
using testing::vec;

Vector solve(const CompositeProblem& p, const Vector& x0) {
  return forward_backward(p.f, p.g, x0, p.config({100000, 1e-14, 100})).final_point;
}

Vector solve(const ConstrainedProblem& p) {
  return projected_gradient(p.set, p.g, p.set.witness(), p.config({100000, 1e-14, 100})).final_point;
}

void expect_error(ErrorKind kind, const std::function<void()>& body) {
  try {
    body();
    FAIL() << "expected " << to_string(kind);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

TEST(LassoTest, Examples) {
  EXPECT_VEC_NEAR(solve(build_lasso(LinearOperator::diagonal(vec({1, 2})), vec({1, 2})), vec({1, 1})),
                  vec({0, 0.75}), 1e-10);
  EXPECT_VEC_NEAR(solve(build_lasso(LinearOperator(mat(2, 2, {1, 3, 2, 1})), vec({0, 0})), vec({1, -1})),
                  vec({0, 0}), 1e-12);
  EXPECT_VEC_NEAR(solve(build_lasso(LinearOperator::identity(1), vec({3})), vec({0})),
                  oracle::subgradient_solve_separable_l1(vec({1}), vec({3})), 1e-12);
  expect_error(ErrorKind::kConfig, [] { build_lasso(LinearOperator(Matrix::Zero(1, 2)), vec({1})); });
}

TEST(ElasticNetTest, Examples) {
  const Vector big = solve(build_elastic_net(LinearOperator::identity(1), vec({1}), 100.0), vec({0.5}));
  EXPECT_LE(std::abs(big(0)), 0.01);
  // (x - 3) + x + 1 = 0
  EXPECT_VEC_NEAR(solve(build_elastic_net(LinearOperator::identity(1), vec({3}), 1.0), vec({0})), vec({1}), 1e-12);
  EXPECT_VEC_NEAR(solve(build_elastic_net(LinearOperator::identity(2), vec({0, 0}), 1.0), vec({2, 2})), vec({0, 0}),
                  1e-12);
  expect_error(ErrorKind::kConfig, [] { build_elastic_net(LinearOperator::identity(1), vec({1}), 0.0); });
  expect_error(ErrorKind::kConfig, [] { build_elastic_net(LinearOperator::identity(1), vec({1}), -2.0); });
}

TEST(ElasticNetTest, ProxStepIsScaledSoftThreshold) {
  // soft_{gamma / (1 + beta gamma)}(x / (1 + beta gamma))
  const auto p = build_elastic_net(LinearOperator::identity(3), vec({1, 2, 3}), 2.0);
  const double gamma = 0.3;
  const Vector x = vec({2, -0.1, -4});
  const double s = 1.0 + 2.0 * gamma;
  EXPECT_VEC_NEAR(p.f.prox(gamma, x), soft_threshold(x / s, gamma / s), 1e-15);
}

TEST(ConstrainedLsTest, Examples) {
  EXPECT_VEC_NEAR(solve(build_constrained_ls(ConvexSet::nonneg_orthant(2), LinearOperator::identity(2), vec({-1, 2}))),
                  vec({0, 2}), 1e-12);
  EXPECT_VEC_NEAR(solve(build_constrained_ls(ConvexSet::box(vec({0}), vec({1})), LinearOperator(mat(1, 1, {2})),
                                             vec({3}))),
                  vec({1}), 1e-12);
  const Matrix A = mat(3, 2, {1, 0, 1, 1, 0, 2});
  const Vector y = vec({1, 2, 3});
  const Vector normal = (A.transpose() * A).fullPivLu().solve(A.transpose() * y);
  EXPECT_VEC_NEAR(solve(build_constrained_ls(ConvexSet::whole_space(2), LinearOperator(A), y)), normal, 1e-10);
}

TEST(ImageProjectionTest, Examples) {
  const auto surj = project_image(LinearOperator(mat(2, 3, {1, 0, 1, 0, 1, 1})), ConvexSet::whole_space(3),
                                  vec({2, -1}), IterationLimits{100000, 1e-14, 100});
  EXPECT_VEC_NEAR(surj.projection, vec({2, -1}), 1e-10);
  const auto ball = project_image(LinearOperator::scaled_identity(2, 2.0), ConvexSet::ball(vec({0, 0}), 1.0),
                                  vec({4, 0}));
  EXPECT_VEC_NEAR(ball.projection, vec({2, 0}), 1e-10);
  EXPECT_TRUE(ConvexSet::ball(vec({0, 0}), 1.0).contains(ball.preimage));
  const LinearOperator L(mat(2, 2, {1, 2, 3, 4}));
  const auto single = project_image(L, ConvexSet::singleton(vec({1, -1})), vec({7, 7}));
  EXPECT_VEC_NEAR(single.projection, L.apply(vec({1, -1})), 1e-14);
}

TEST(MinkowskiTest, Examples) {
  const auto ball = ConvexSet::ball(vec({0, 0}), 1.0);
  const auto box = ConvexSet::box(vec({0, 0}), vec({1, 1}));
  EXPECT_VEC_NEAR(project_minkowski_sum({ball}, vec({3, 4})).projection, vec({0.6, 0.8}), 1e-10);
  const auto r = project_minkowski_sum({ball, box}, vec({5, 0}), IterationLimits{100000, 1e-14, 100});
  EXPECT_VEC_NEAR(r.projection, vec({2, 0}), 1e-8);
  EXPECT_TRUE(ball.contains(r.components[0]));
  EXPECT_TRUE(box.contains(r.components[1]));
  EXPECT_VEC_NEAR(project_minkowski_sum({ball, box}, vec({0.5, 0.5})).projection, vec({0.5, 0.5}), 1e-6);
  expect_error(ErrorKind::kConfig, [] { project_minkowski_sum({}, vec({1})); });
}

TEST(MinkowskiProperty, ProjectionOptimality) {
  Gen gen(51);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = gen.integer(1, 3);
    std::vector<ConvexSet> sets;
    for (int k = gen.integer(1, 3); k > 0; --k) {
      // Bounded kinds keep the sum closed.
      sets.push_back(gen.coin() ? ConvexSet::ball(gen.vector(n), gen.uniform(0.2, 2.0))
                                : ConvexSet::box(-gen.vector(n).cwiseAbs() - Vector::Constant(n, 0.1),
                                                 gen.vector(n).cwiseAbs()));
    }
    const Vector y = gen.vector(n, 6.0);
    const auto r = project_minkowski_sum(sets, y, IterationLimits{200000, 1e-14, 1000});
    Vector sum = Vector::Zero(n);
    for (std::size_t i = 0; i < sets.size(); ++i) {
      EXPECT_TRUE(sets[i].contains(r.components[i]));
      sum += r.components[i];
    }
    EXPECT_VEC_NEAR(sum, r.projection, 1e-12);
    for (int k = 0; k < 100; ++k) {
      Vector s = Vector::Zero(n);
      for (const auto& C : sets) s += C.project(gen.vector(n, 4.0));
      EXPECT_LE((y - r.projection).dot(s - r.projection), 1e-6);
    }
  }
}

TEST(AlternatingTest, TwoLinesThroughOrigin) {
  const auto x_axis = ProxFunction::indicator(ConvexSet::hyperplane(vec({0, 1}), 0.0));
  const auto diagonal = ProxFunction::indicator(ConvexSet::hyperplane(vec({1, -1}), 0.0));
  const auto r = alternating_prox(x_axis, diagonal, 1.0, vec({1, 0}), IterationLimits{30, 1e-300, 1});
  for (const auto& e : r.report.trace) EXPECT_VEC_NEAR(e.x, vec({std::ldexp(1.0, -static_cast<int>(e.n)), 0}), 1e-15);
  EXPECT_LE(r.max_fb_deviation, 1e-12);
}

TEST(AlternatingTest, StationaryAndDisjoint) {
  const auto C = ConvexSet::ball(vec({0, 0}), 1.0);
  const auto r = alternating_prox(ProxFunction::indicator(C), ProxFunction::indicator(C), 0.7, vec({0.3, 0.4}));
  EXPECT_VEC_NEAR(r.x, vec({0.3, 0.4}), 0.0);
  const auto left = ProxFunction::indicator(ConvexSet::halfspace(vec({1}), -1.0));
  const auto right = ProxFunction::indicator(ConvexSet::halfspace(vec({-1}), -1.0));
  const auto d = alternating_prox(left, right, 1.0, vec({-5}));
  EXPECT_VEC_NEAR(d.x, vec({-1}), 1e-12);
}

TEST(BarycentricTest, Examples) {
  const auto mean = barycentric_prox({ProxFunction::indicator(ConvexSet::singleton(vec({0, 0}))),
                                      ProxFunction::indicator(ConvexSet::singleton(vec({3, 0}))),
                                      ProxFunction::indicator(ConvexSet::singleton(vec({0, 6})))},
                                     1.0, vec({10, 10}));
  EXPECT_VEC_NEAR(mean.x, vec({1, 2}), 1e-12);
  // One term: proximal point on l1.
  const auto single = barycentric_prox({ProxFunction::l1(1)}, 0.5, vec({2}), IterationLimits{3, 1e-300, 1});
  EXPECT_VEC_NEAR(single.x, vec({0.5}), 1e-15);
  const auto f = ProxFunction::reflected_translated(ProxFunction::l1(2), vec({1, -1}));
  const auto same = barycentric_prox({f, f}, 1.0, vec({4, 4}));
  EXPECT_VEC_NEAR(same.x, vec({1, -1}), 1e-10);
  EXPECT_THROW(barycentric_prox({}, 1.0, vec({0})), Error);
}

TEST(BivariateTest, Examples) {
  const Vector z = vec({3, -0.5});
  const auto l1 = ProxFunction::l1(2);
  const auto zero_ell = ProxFunction::indicator(ConvexSet::singleton(vec({0, 0})));
  const auto r = bivariate_coupling(l1, zero_ell, z, 2.0, vec({0, 0}));
  EXPECT_VEC_NEAR(r.x, l1.prox(2.0, z), 1e-12);
  EXPECT_VEC_NEAR(r.w, vec({0, 0}), 1e-12);

  const auto single = bivariate_coupling(ProxFunction::indicator(ConvexSet::singleton(vec({1, 1}))), l1, z, 1.0,
                                         vec({1, 1}), IterationLimits{1, 1e-300, 1});
  EXPECT_VEC_NEAR(single.x, vec({1, 1}), 0.0);

  const auto flat = bivariate_coupling(ProxFunction::zero(2), ProxFunction::zero(2), z, 1.0, vec({0.25, 4}));
  EXPECT_VEC_NEAR(flat.x, vec({0.25, 4}), 0.0);
  EXPECT_VEC_NEAR(flat.w, z - flat.x, 1e-15);
}

TEST(BestApproximationTest, Examples) {
  const auto whole = best_approximation(ConvexSet::whole_space(2), ConvexSet::whole_space(2),
                                        LinearOperator::identity(2), vec({1, 2}));
  EXPECT_VEC_NEAR(whole.x, vec({1, 2}), 0.0);
  EXPECT_VEC_NEAR(whole.v, vec({0, 0}), 0.0);

  const auto half = best_approximation(ConvexSet::whole_space(2), ConvexSet::halfspace(vec({1, 0}), 0.0),
                                       LinearOperator::identity(2), vec({1, 1}));
  EXPECT_VEC_NEAR(half.x, vec({0, 1}), 1e-10);

  const auto C = ConvexSet::nonneg_orthant(2);
  const auto kkt = best_approximation(C, ConvexSet::halfspace(vec({1, 1}), 1.0), LinearOperator::identity(2),
                                      vec({1, 1}), IterationLimits{100000, 1e-14, 100});
  EXPECT_VEC_NEAR(kkt.x, vec({0.5, 0.5}), 1e-8);
  EXPECT_VEC_NEAR(kkt.x, C.project(vec({1, 1}) - kkt.v), 1e-6);
}

TEST(SupportRegularizedTest, Examples) {
  const Vector z = vec({3, -4});
  const auto l1 = ProxFunction::l1(2);
  const auto zero_set = support_regularized(l1, ConvexSet::singleton(vec({0, 0})), LinearOperator::identity(2),
                                            vec({0, 0}), z);
  EXPECT_VEC_NEAR(zero_set.x, l1.prox(1.0, z), 1e-12);

  const double lambda = 2.0;
  const auto ball = support_regularized(ProxFunction::zero(2), ConvexSet::ball(vec({0, 0}), lambda),
                                        LinearOperator::identity(2), vec({0, 0}), z);
  EXPECT_VEC_NEAR(ball.x, z * (1.0 - lambda / z.norm()), 1e-10);

  const auto box = support_regularized(ProxFunction::zero(2), ConvexSet::box(vec({-1, -1}), vec({1, 1})),
                                       LinearOperator::identity(2), vec({0, 0}), vec({3, -0.5}));
  EXPECT_VEC_NEAR(box.x, vec({2, 0}), 1e-10);

  expect_error(ErrorKind::kConfig, [] {
    support_regularized(ProxFunction::zero(1), ConvexSet::halfspace(vec({1}), 0.0), LinearOperator::identity(1),
                        vec({0}), vec({1}));
  });
}

TEST(SupportRegularizedTest, SmallBallFixedPoint) {
  const LinearOperator L(mat(1, 2, {1, -1}));
  const auto phi = ProxFunction::indicator(ConvexSet::box(vec({0, 0}), vec({2, 2})));
  const auto r = support_regularized(phi, ConvexSet::ball(vec({0}), 0.3), L, vec({0}), vec({1.5, 0.2}),
                                     IterationLimits{100000, 1e-14, 100});
  EXPECT_VEC_NEAR(r.x, phi.prox(1.0, vec({1.5, 0.2}) - L.adjoint_apply(r.v)), 1e-8);
}

TEST(MultichannelTest, SingleChannelIsConstrainedLs) {
  const LinearOperator A(mat(2, 2, {2, 1, 0, 1}));
  const auto C = ConvexSet::box(vec({0, 0}), vec({1, 1}));
  const Vector y = vec({4, -1});
  const auto block = multichannel_recovery({C}, BlockOperator({{A}}, {2}, {2}), {y}, IterationLimits{100000, 1e-14, 100});
  EXPECT_VEC_NEAR(block.blocks[0], solve(build_constrained_ls(C, A, y)), 1e-9);
}

TEST(MultichannelTest, ConsistentInstanceReachesZero) {
  Gen gen(52);
  const LinearOperator A11(gen.matrix(2, 2)), A12(gen.matrix(2, 3)), A21(gen.matrix(1, 2));
  const BlockOperator L({{A11, A12}, {A21, std::nullopt}}, {2, 1}, {2, 3});
  const auto C1 = ConvexSet::box(vec({-1, -1}), vec({1, 1}));
  const auto C2 = ConvexSet::ball(Vector::Zero(3), 1.0);
  const Vector x1 = vec({0.3, -0.2});
  const Vector x2 = vec({0.1, 0.2, -0.4});
  const auto ys = L.apply({x1, x2});
  const auto r = multichannel_recovery({C1, C2}, L, ys, IterationLimits{200000, 1e-15, 1000});
  EXPECT_LE(r.report.trace.back().objective, 1e-12);
  EXPECT_DOUBLE_EQ(multichannel_beta(L), L.row_norm_sq(0) + L.row_norm_sq(1));
}

TEST(MultichannelTest, GridMismatch) {
  const BlockOperator L({{LinearOperator::identity(2)}}, {2}, {2});
  expect_error(ErrorKind::kConfig, [&] {
    multichannel_recovery({ConvexSet::whole_space(2), ConvexSet::whole_space(2)}, L, {vec({1, 1})});
  });
}

TEST(EnvelopeRelaxationTest, ConsistentFeasibility) {
  const auto p = build_envelope_relaxation(
      ProxFunction::zero(2),
      {EnvelopeTerm{1.0, 1.0, LinearOperator::row(vec({1, 0})), ProxFunction::indicator(ConvexSet::singleton(vec({1})))},
       EnvelopeTerm{1.0, 1.0, LinearOperator::row(vec({0, 1})), ProxFunction::indicator(ConvexSet::singleton(vec({2})))}});
  EXPECT_VEC_NEAR(solve(p, vec({0, 0})), vec({1, 2}), 1e-10);
}

TEST(EnvelopeRelaxationTest, InconsistentLeastSquares) {
  const Matrix A = mat(3, 2, {1, 0, 0, 1, 1, 1});
  const Vector y = vec({1, 1, 3});
  const auto p = build_envelope_relaxation(
      ProxFunction::zero(2), {EnvelopeTerm{1.0, 1.0, LinearOperator(A), ProxFunction::indicator(ConvexSet::singleton(y))}});
  const Vector normal = (A.transpose() * A).fullPivLu().solve(A.transpose() * y);
  EXPECT_VEC_NEAR(solve(p, vec({0, 0})), normal, 1e-10);
}

TEST(EnvelopeRelaxationTest, SingleIndicatorTermMatchesAlternating) {
  const auto C = ConvexSet::box(vec({-1, -1}), vec({0, 0}));
  const auto D = ConvexSet::ball(vec({2, 2}), 1.0);
  const auto p = build_envelope_relaxation(ProxFunction::indicator(C),
                                           {EnvelopeTerm{1.0, 1.0, LinearOperator::identity(2), ProxFunction::indicator(D)}});
  const auto fb = forward_backward(p.f, p.g, vec({-1, -1}), SolverConfig{StepSchedule::constant(1.0, 1.0), {40, 1e-300, 1}});
  const auto alt = alternating_prox(p.f, ProxFunction::indicator(D), 1.0, vec({-1, -1}), {40, 1e-300, 1});
  for (std::size_t i = 0; i < fb.trace.size(); ++i) EXPECT_VEC_NEAR(fb.trace[i].x, alt.report.trace[i].x, 1e-12);
}

TEST(EnvelopeRelaxationTest, Errors) {
  expect_error(ErrorKind::kConfig, [] { build_envelope_relaxation(ProxFunction::zero(1), {}); });
  expect_error(ErrorKind::kConfig, [] {
    build_envelope_relaxation(ProxFunction::zero(1),
                              {EnvelopeTerm{1.0, -1.0, LinearOperator::identity(1), ProxFunction::l1(1)}});
  });
}

TEST(EnvelopeRelaxationProperty, ExactOnConsistentInstances) {
  // Plant x in C and choose D_k containing L_k x; every L_k x lands in Argmin h_k.
  Gen gen(53);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = gen.integer(1, 3);
    const auto C = ConvexSet::box(-Vector::Constant(n, 2.0), Vector::Constant(n, 2.0));
    const Vector planted = gen.vector(n, 1.0);
    std::vector<EnvelopeTerm> terms;
    for (int k = gen.integer(1, 3); k > 0; --k) {
      const Index m = gen.integer(1, 3);
      const LinearOperator Lk(gen.matrix(m, n));
      const Vector center = Lk.apply(planted) + gen.vector(m, 0.3);
      const auto D = ConvexSet::ball(center, 0.5);
      terms.push_back(EnvelopeTerm{gen.uniform(0.5, 2.0), gen.uniform(0.5, 2.0), Lk, ProxFunction::indicator(D)});
    }
    const auto p = build_envelope_relaxation(ProxFunction::indicator(C), terms);
    const Vector x = solve(p, C.witness());
    for (const auto& t : terms) EXPECT_LE(moreau_grad(t.h, t.rho, t.L.apply(x)).norm(), 1e-6);
  }
}

}  // namespace
}  // namespace proxkit
