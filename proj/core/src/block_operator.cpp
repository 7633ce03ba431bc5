#include "proxkit/block_operator.hpp"

#include "proxkit/errors.hpp"

#include <numeric>
#include <sstream>

namespace proxkit {

BlockOperator::BlockOperator(Grid blocks, std::vector<Index> row_dims, std::vector<Index> col_dims)
    : blocks_(std::move(blocks)), row_dims_(std::move(row_dims)), col_dims_(std::move(col_dims)) {
  if (row_dims_.empty() || col_dims_.empty())
    fail(ErrorKind::kConfig, "block operator needs at least one block row and column");
  for (Index d : row_dims_)
    if (d <= 0) fail(ErrorKind::kConfig, "block row dimensions must be positive");
  for (Index d : col_dims_)
    if (d <= 0) fail(ErrorKind::kConfig, "block column dimensions must be positive");
  if (blocks_.size() != row_dims_.size())
    fail(ErrorKind::kConfig, "block grid row count does not match row_dims");
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    if (blocks_[k].size() != col_dims_.size())
      fail(ErrorKind::kConfig, "block grid column count does not match col_dims");
    for (std::size_t i = 0; i < blocks_[k].size(); ++i) {
      const auto& b = blocks_[k][i];
      if (b && (b->rows() != row_dims_[k] || b->cols() != col_dims_[i])) {
        std::ostringstream os;
        os << "block (" << k << ", " << i << ") is " << b->rows() << "x" << b->cols()
           << ", expected " << row_dims_[k] << "x" << col_dims_[i];
        fail(ErrorKind::kConfig, os.str());
      }
    }
  }
}

std::vector<Vector> BlockOperator::apply(const std::vector<Vector>& x) const {
  if (x.size() != col_dims_.size()) fail(ErrorKind::kConfig, "block operand count mismatch");
  std::vector<Vector> out;
  out.reserve(row_dims_.size());
  for (std::size_t k = 0; k < row_dims_.size(); ++k) {
    Vector acc = Vector::Zero(row_dims_[k]);
    for (std::size_t i = 0; i < col_dims_.size(); ++i)
      if (const auto& b = blocks_[k][i]) acc += b->apply(x[i]);
    out.push_back(std::move(acc));
  }
  return out;
}

std::vector<Vector> BlockOperator::adjoint_apply(const std::vector<Vector>& u) const {
  if (u.size() != row_dims_.size()) fail(ErrorKind::kConfig, "block adjoint operand count mismatch");
  std::vector<Vector> out;
  out.reserve(col_dims_.size());
  for (std::size_t i = 0; i < col_dims_.size(); ++i) {
    Vector acc = Vector::Zero(col_dims_[i]);
    for (std::size_t k = 0; k < row_dims_.size(); ++k)
      if (const auto& b = blocks_[k][i]) acc += b->adjoint_apply(u[k]);
    out.push_back(std::move(acc));
  }
  return out;
}

double BlockOperator::row_norm_sq(std::size_t k) const {
  double total = 0.0;
  for (const auto& b : blocks_.at(k))
    if (b && !b->is_zero()) {
      const double n = b->norm_bound();
      total += n * n;
    }
  return total;
}

void BlockOperator::require_coupled_rows() const {
  for (std::size_t k = 0; k < row_dims_.size(); ++k) {
    bool any = false;
    for (const auto& b : blocks_[k]) any = any || (b && !b->is_zero());
    if (!any) {
      std::ostringstream os;
      os << "block row " << k << " has no nonzero operator (sum_i ||L_ki||^2 must be > 0)";
      fail(ErrorKind::kConfig, os.str());
    }
  }
}

Index BlockOperator::total_rows() const {
  return std::accumulate(row_dims_.begin(), row_dims_.end(), Index{0});
}

Index BlockOperator::total_cols() const {
  return std::accumulate(col_dims_.begin(), col_dims_.end(), Index{0});
}

LinearOperator BlockOperator::stacked() const {
  Matrix dense = Matrix::Zero(total_rows(), total_cols());
  Index r0 = 0;
  for (std::size_t k = 0; k < row_dims_.size(); ++k) {
    Index c0 = 0;
    for (std::size_t i = 0; i < col_dims_.size(); ++i) {
      if (const auto& b = blocks_[k][i]) dense.block(r0, c0, row_dims_[k], col_dims_[i]) = b->matrix();
      c0 += col_dims_[i];
    }
    r0 += row_dims_[k];
  }
  return LinearOperator(std::move(dense));
}

Vector stack(const std::vector<Vector>& parts) {
  Index n = 0;
  for (const auto& p : parts) n += p.size();
  Vector out(n);
  Index at = 0;
  for (const auto& p : parts) {
    out.segment(at, p.size()) = p;
    at += p.size();
  }
  return out;
}

std::vector<Vector> unstack(const Vector& x, const std::vector<Index>& dims) {
  const Index total = std::accumulate(dims.begin(), dims.end(), Index{0});
  require_dim(x, total, "stacked vector");
  std::vector<Vector> out;
  out.reserve(dims.size());
  Index at = 0;
  for (Index d : dims) {
    out.emplace_back(x.segment(at, d));
    at += d;
  }
  return out;
}

}  // namespace proxkit
