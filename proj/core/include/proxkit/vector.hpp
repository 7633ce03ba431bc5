#pragma once

#include <Eigen/Core>

#include <string>

namespace proxkit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Index = Eigen::Index;

/// Throws kInput unless `x` has dimension `dim`. `what` names the argument.
void require_dim(const Vector& x, Index dim, const char* what);

/// Throws kInput if any entry is NaN or infinite.
void require_finite(const Vector& x, const char* what);
void require_finite(const Matrix& m, const char* what);

inline bool all_finite(const Vector& x) { return x.allFinite(); }

std::string format_vector(const Vector& x, int precision = 12);

}  // namespace proxkit
