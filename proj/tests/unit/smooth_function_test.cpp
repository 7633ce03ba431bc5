#include "proxkit/smooth_function.hpp"

#include "proxkit/errors.hpp"
#include "proxkit/oracle.hpp"
#include "test_support.hpp"

#include <cmath>

namespace proxkit {
namespace {

using testing::Gen;
using testing::mat;
using testing::vec;

TEST(SmoothFunctionTest, LeastSquaresExample) {
  const auto g = SmoothFunction::least_squares(LinearOperator::diagonal(vec({1, 2})), vec({1, 2}));
  EXPECT_DOUBLE_EQ(g.lipschitz_beta(), 4.0);
  // 0.5 (||(0, 0)||^2) at the solution; gradient L^T (L x - y)
  EXPECT_EQ(g.value(vec({1, 1})), 0.0);
  EXPECT_DOUBLE_EQ(g.value(vec({0, 0})), 2.5);
  EXPECT_VEC_NEAR(g.grad(vec({0, 0})), vec({-1, -4}), 1e-15);
}

TEST(SmoothFunctionTest, BetaFormulas) {
  const LinearOperator L(mat(2, 2, {3, 0, 0, 1}));
  const auto multi = SmoothFunction::multi_quadratic(
      {QuadraticTerm{2.0, L, vec({0, 0})}, QuadraticTerm{0.5, LinearOperator::identity(2), vec({1, 1})}});
  EXPECT_NEAR(multi.lipschitz_beta(), 2.0 * 9.0 + 0.5, 1e-9);
  const auto env = SmoothFunction::envelope_sum({EnvelopeTerm{2.0, 0.5, L, ProxFunction::l1(2)}});
  EXPECT_NEAR(env.lipschitz_beta(), 2.0 * 9.0 / 0.5, 1e-9);
  EXPECT_EQ(SmoothFunction::zero(3).lipschitz_beta(), 0.0);
  EXPECT_NEAR(SmoothFunction::quadratic_coupling(ProxFunction::l1(2), vec({0, 0}), 0.25).lipschitz_beta(), 4.0,
              1e-15);
}

TEST(SmoothFunctionTest, EnvelopeOfAbsoluteValueIsHuber) {
  const auto env =
      SmoothFunction::envelope_sum({EnvelopeTerm{1.0, 1.0, LinearOperator::identity(1), ProxFunction::l1(1)}});
  EXPECT_DOUBLE_EQ(env.value(vec({0.5})), 0.125);
  EXPECT_DOUBLE_EQ(env.value(vec({3.0})), 2.5);
  EXPECT_VEC_NEAR(env.grad(vec({3.0})), vec({1.0}), 0.0);
  EXPECT_VEC_NEAR(env.grad(vec({-0.25})), vec({-0.25}), 0.0);
}

TEST(SmoothFunctionTest, ConstructionErrors) {
  try {
    SmoothFunction::least_squares(LinearOperator(Matrix::Zero(2, 2)), vec({1, 1}));
    FAIL() << "expected a zero-operator error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kZeroOperator);
  }
  EXPECT_THROW(SmoothFunction::multi_quadratic({}), Error);
  EXPECT_THROW(SmoothFunction::envelope_sum({}), Error);
  EXPECT_THROW(SmoothFunction::envelope_sum({EnvelopeTerm{1.0, 0.0, LinearOperator::identity(1), ProxFunction::l1(1)}}),
               Error);
  EXPECT_THROW(SmoothFunction::envelope_sum({EnvelopeTerm{1.0, 1.0, LinearOperator::identity(2), ProxFunction::l1(1)}}),
               Error);
}

TEST(SmoothFunctionProperty, GradientMatchesFiniteDifferences) {
  Gen gen(21);
  for (int kind = 0; kind < Gen::kSmoothKinds; ++kind) {
    for (int trial = 0; trial < 40; ++trial) {
      const Index n = gen.integer(1, 4);
      const auto g = gen.smooth(n, kind);
      const Vector x = gen.vector(n);
      const Vector exact = g.grad(x);
      const Vector fd = oracle::finite_diff_grad(g, x);
      EXPECT_LE((fd - exact).norm(), 1e-5 * (1.0 + exact.norm())) << g.kind_name();
    }
  }
}

TEST(SmoothFunctionProperty, DescentInequality) {
  Gen gen(22);
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = gen.integer(1, 4);
    const auto g = gen.smooth(n, gen.integer(0, Gen::kSmoothKinds - 1));
    const Vector x = gen.vector(n);
    const Vector y = gen.vector(n);
    const double upper = g.value(x) + g.grad(x).dot(y - x) + 0.5 * g.lipschitz_beta() * (y - x).squaredNorm();
    const double lower = g.value(x) + g.grad(x).dot(y - x);
    const double tol = 1e-9 * (1.0 + std::abs(upper));
    EXPECT_LE(g.value(y), upper + tol) << g.kind_name();
    EXPECT_GE(g.value(y), lower - tol) << g.kind_name();
  }
}

TEST(SmoothFunctionProperty, GradientIsCocoercive) {
  // <grad x - grad y, x - y> >= ||grad x - grad y||^2 / beta
  Gen gen(23);
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = gen.integer(1, 4);
    const auto g = gen.smooth(n, gen.integer(1, Gen::kSmoothKinds - 1));
    const Vector x = gen.vector(n);
    const Vector y = gen.vector(n);
    const Vector d = g.grad(x) - g.grad(y);
    const double beta = g.lipschitz_beta();
    EXPECT_GE(d.dot(x - y), d.squaredNorm() / beta - 1e-9 * (1.0 + d.squaredNorm())) << g.kind_name();
    EXPECT_LE(d.norm(), beta * (x - y).norm() * (1.0 + 1e-9) + 1e-12) << g.kind_name();
  }
}

}  // namespace
}  // namespace proxkit
