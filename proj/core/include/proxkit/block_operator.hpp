#pragma once

#include "proxkit/linear_operator.hpp"

#include <optional>
#include <vector>

namespace proxkit {

/// p x m grid of linear operators L_ki : H_i -> G_k. Absent blocks are zero.
class BlockOperator {
 public:
  using Grid = std::vector<std::vector<std::optional<LinearOperator>>>;

  BlockOperator(Grid blocks, std::vector<Index> row_dims, std::vector<Index> col_dims);

  std::size_t block_rows() const { return row_dims_.size(); }  // p
  std::size_t block_cols() const { return col_dims_.size(); }  // m
  const std::vector<Index>& row_dims() const { return row_dims_; }
  const std::vector<Index>& col_dims() const { return col_dims_; }
  const std::optional<LinearOperator>& block(std::size_t k, std::size_t i) const {
    return blocks_[k][i];
  }

  /// (sum_i L_ki x_i)_k
  std::vector<Vector> apply(const std::vector<Vector>& x) const;
  /// (sum_k L_ki^* u_k)_i
  std::vector<Vector> adjoint_apply(const std::vector<Vector>& u) const;

  /// sum_i ||L_ki||^2 (norm bounds).
  double row_norm_sq(std::size_t k) const;
  /// Throws kConfig unless every block row has a nonzero block.
  void require_coupled_rows() const;

  /// Equivalent single dense operator on the stacked product spaces.
  LinearOperator stacked() const;

  Index total_rows() const;
  Index total_cols() const;

 private:
  Grid blocks_;
  std::vector<Index> row_dims_;
  std::vector<Index> col_dims_;
};

/// Concatenate block vectors into one vector and back.
Vector stack(const std::vector<Vector>& parts);
std::vector<Vector> unstack(const Vector& x, const std::vector<Index>& dims);

}  // namespace proxkit
