#include "proxkit/diagnostics.hpp"

#include "proxkit/errors.hpp"
#include "proxkit/oracle.hpp"
#include "proxkit/problems.hpp"
#include "test_support.hpp"

namespace proxkit {
namespace {

using testing::vec;

SolveReport synthetic(const std::vector<double>& objectives) {
  SolveReport r;
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    TraceEntry e;
    e.n = i;
    e.x = vec({0});
    e.objective = objectives[i];
    r.trace.push_back(e);
  }
  return r;
}

TEST(DiagnosticsTest, SequencesFromSyntheticTrace) {
  // gap_n = 1 / n^2 for n >= 1
  std::vector<double> obj{5.0};
  for (int n = 1; n <= 8; ++n) obj.push_back(2.0 + 1.0 / (n * n));
  const auto d = rate_diagnostics(synthetic(obj), 2.0);
  ASSERT_EQ(d.n.size(), 9u);
  EXPECT_DOUBLE_EQ(d.gap[0], 3.0);
  EXPECT_DOUBLE_EQ(d.n_gap[4], 0.25);
  EXPECT_NEAR(d.n2_gap[4], 1.0, 1e-15);
  EXPECT_EQ(d.tail_begin, 6u);
  EXPECT_NEAR(d.tail_max_n_gap, 1.0 / 6.0, 1e-15);
  EXPECT_TRUE(d.n_gap_nonincreasing_in_tail());
  EXPECT_EQ(d.first_iteration_below(0.05), std::optional<std::size_t>(5));
  EXPECT_FALSE(d.first_iteration_below(1e-3).has_value());
  EXPECT_TRUE(d.n2_gap_bounded_after(1, 1.0 + 1e-12));
}

TEST(DiagnosticsTest, BoundAfterEarlyExactStop) {
  EXPECT_TRUE(rate_diagnostics(synthetic({3.0, 2.5, 2.0, 2.0}), 2.0).n2_gap_bounded_after(10, 4.0));
  EXPECT_FALSE(rate_diagnostics(synthetic({3.0, 2.5, 2.1}), 2.0).n2_gap_bounded_after(10, 4.0));
  // n^2 gaps 0.5, 0.8, 0.9, 0 after n = 1
  const auto d = rate_diagnostics(synthetic({3.0, 2.5, 2.2, 2.1, 2.0}), 2.0);
  EXPECT_FALSE(d.n2_gap_bounded_after(1, 1.0));
  EXPECT_TRUE(d.n2_gap_bounded_after(1, 2.0));
}

TEST(DiagnosticsTest, OptimalStartHasZeroGaps) {
  const auto d = rate_diagnostics(synthetic({1.5, 1.5, 1.5 + 1e-17}), 1.5);
  for (double g : d.gap) EXPECT_EQ(g, 0.0);
}

TEST(DiagnosticsTest, ReferenceErrors) {
  try {
    rate_diagnostics(synthetic({1.0, 0.5}), 0.9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kReference);
  }
  EXPECT_THROW(rate_diagnostics(SolveReport{}, 0.0), Error);
  EXPECT_THROW(rate_diagnostics(synthetic({1.0}), std::numeric_limits<double>::infinity()), Error);
}

TEST(DiagnosticsTest, ConvergedLassoTailBelowFirstQuartile) {
  const auto lasso = build_lasso(LinearOperator::diagonal(vec({1, 2})), vec({1, 2}));
  const auto report = forward_backward(lasso.f, lasso.g, vec({1, 1}), lasso.config({1000, 1e-12, 1}));
  // mu from the coordinatewise subgradient oracle.
  const Vector xstar = oracle::subgradient_solve_separable_l1(vec({1, 2}), vec({1, 2}));
  const double mu = lasso.f.value(xstar).value() + lasso.g.value(xstar);
  EXPECT_DOUBLE_EQ(mu, 1.375);
  const auto d = rate_diagnostics(report, mu);
  EXPECT_LE(d.gap.back(), 1e-12);
  const std::size_t quarter = d.n.size() / 4;
  EXPECT_LE(d.tail_max_n_gap, d.n_gap[quarter]);
  EXPECT_TRUE(d.n_gap_nonincreasing_in_tail());
}

}  // namespace
}  // namespace proxkit
