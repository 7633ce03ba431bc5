#include "proxkit/block_operator.hpp"

#include "proxkit/errors.hpp"
#include "test_support.hpp"

namespace proxkit {
namespace {

using testing::Gen;
using testing::vec;

BlockOperator two_by_two() {
  BlockOperator::Grid grid(2, std::vector<std::optional<LinearOperator>>(2));
  grid[0][0] = LinearOperator::identity(2);
  grid[0][1] = LinearOperator::diagonal(vec({2, 3}));
  grid[1][1] = LinearOperator::row(vec({1, 1}));
  return BlockOperator(grid, {2, 1}, {2, 2});
}

TEST(BlockOperatorTest, ApplyAndAdjoint) {
  const auto L = two_by_two();
  const auto y = L.apply({vec({1, 2}), vec({1, 1})});
  ASSERT_EQ(y.size(), 2u);
  EXPECT_VEC_NEAR(y[0], vec({3, 5}), 0.0);
  EXPECT_VEC_NEAR(y[1], vec({2}), 0.0);
  const auto x = L.adjoint_apply({vec({1, 0}), vec({1})});
  EXPECT_VEC_NEAR(x[0], vec({1, 0}), 0.0);
  EXPECT_VEC_NEAR(x[1], vec({3, 1}), 0.0);
}

TEST(BlockOperatorTest, StackedMatchesBlockwise) {
  const auto L = two_by_two();
  Gen gen(5);
  const std::vector<Vector> x = {gen.vector(2), gen.vector(2)};
  const Vector blockwise = stack(L.apply(x));
  const Vector dense = L.stacked().apply(stack(x));
  EXPECT_VEC_NEAR(blockwise, dense, 1e-14);
  EXPECT_EQ(L.total_rows(), 3);
  EXPECT_EQ(L.total_cols(), 4);
}

TEST(BlockOperatorTest, RowNormSquares) {
  const auto L = two_by_two();
  EXPECT_DOUBLE_EQ(L.row_norm_sq(0), 1.0 + 9.0);
  EXPECT_DOUBLE_EQ(L.row_norm_sq(1), 2.0);
}

TEST(BlockOperatorTest, MismatchedBlockIsConfigError) {
  BlockOperator::Grid grid(1, std::vector<std::optional<LinearOperator>>(2));
  grid[0][0] = LinearOperator::identity(3);
  try {
    BlockOperator(grid, {2}, {2, 2});
    FAIL() << "expected a config error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
  }
  BlockOperator::Grid short_grid(1, std::vector<std::optional<LinearOperator>>(1));
  EXPECT_THROW(BlockOperator(short_grid, {2}, {2, 2}), Error);
}

TEST(BlockOperatorTest, UncoupledRowIsConfigError) {
  BlockOperator::Grid grid(2, std::vector<std::optional<LinearOperator>>(1));
  grid[0][0] = LinearOperator::identity(1);
  const BlockOperator L(grid, {1, 1}, {1});
  try {
    L.require_coupled_rows();
    FAIL() << "expected a config error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
  }
}

TEST(BlockOperatorTest, StackUnstackRoundTrip) {
  const std::vector<Vector> parts = {vec({1}), vec({2, 3}), vec({4})};
  const Vector s = stack(parts);
  EXPECT_VEC_NEAR(s, vec({1, 2, 3, 4}), 0.0);
  const auto back = unstack(s, {1, 2, 1});
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t i = 0; i < parts.size(); ++i) EXPECT_VEC_NEAR(back[i], parts[i], 0.0);
  EXPECT_THROW(unstack(s, {1, 1}), Error);
}

TEST(BlockOperatorProperty, AdjointConsistency) {
  Gen gen(77);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<Index> rows = {gen.integer(1, 3), gen.integer(1, 3)};
    const std::vector<Index> cols = {gen.integer(1, 3), gen.integer(1, 3), gen.integer(1, 3)};
    BlockOperator::Grid grid(2, std::vector<std::optional<LinearOperator>>(3));
    for (std::size_t k = 0; k < 2; ++k)
      for (std::size_t i = 0; i < 3; ++i)
        if (gen.coin()) grid[k][i] = gen.op(rows[k], cols[i]);
    const BlockOperator L(grid, rows, cols);
    std::vector<Vector> x, u;
    for (auto c : cols) x.push_back(gen.vector(c));
    for (auto r : rows) u.push_back(gen.vector(r));
    const double lhs = stack(L.apply(x)).dot(stack(u));
    const double rhs = stack(x).dot(stack(L.adjoint_apply(u)));
    EXPECT_NEAR(lhs, rhs, 1e-10 * (1 + stack(x).norm() * stack(u).norm()));
  }
}

}  // namespace
}  // namespace proxkit
