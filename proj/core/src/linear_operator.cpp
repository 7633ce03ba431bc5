#include "proxkit/linear_operator.hpp"

#include "proxkit/errors.hpp"

#include <cmath>
#include <mutex>
#include <sstream>

namespace proxkit {

void require_dim(const Vector& x, Index dim, const char* what) {
  if (x.size() != dim) {
    std::ostringstream os;
    os << what << " has dimension " << x.size() << ", expected " << dim;
    fail(ErrorKind::kInput, os.str());
  }
}

void require_finite(const Vector& x, const char* what) {
  if (!x.allFinite()) fail(ErrorKind::kInput, std::string(what) + " has non-finite entries");
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) fail(ErrorKind::kInput, std::string(what) + " has non-finite entries");
}

std::string format_vector(const Vector& x, int precision) {
  std::ostringstream os;
  os.precision(precision);
  os << '(';
  for (Index i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x[i];
  }
  os << ')';
  return os.str();
}

struct LinearOperator::NormCache {
  std::mutex mutex;
  std::optional<NormEstimate> value;
};

namespace {

bool is_diagonal(const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (i != j && m(i, j) != 0.0) return false;
  return true;
}

struct PowerRun {
  double sigma = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Power iteration on L*L from a fixed start vector.
PowerRun power_iterate(const Matrix& m, Vector v, double tol, int max_iter) {
  PowerRun run;
  v.normalize();
  double previous = -1.0;
  for (int k = 1; k <= max_iter; ++k) {
    const Vector lv = m * v;
    const Vector w = m.transpose() * lv;
    const double sigma = std::sqrt(lv.squaredNorm());
    run.sigma = sigma;
    run.iterations = k;
    const double wn = w.norm();
    if (wn == 0.0) return run;  // start vector in the null space
    if (previous >= 0.0 && std::abs(sigma - previous) <= 0.1 * tol * sigma) {
      run.converged = true;
      return run;
    }
    previous = sigma;
    v = w / wn;
  }
  return run;
}

Vector perturbed_start(Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(static_cast<double>(i) + 1.0);
  return v;
}

}  // namespace

LinearOperator::LinearOperator(Matrix entries)
    : entries_(std::move(entries)), cache_(std::make_shared<NormCache>()) {
  if (entries_.rows() <= 0 || entries_.cols() <= 0)
    fail(ErrorKind::kInput, "linear operator must have positive rows and cols");
  require_finite(entries_, "linear operator");
  is_zero_ = entries_.isZero(0.0);
  if (!is_zero_ && is_diagonal(entries_)) {
    const Index k = std::min(entries_.rows(), entries_.cols());
    double largest = 0.0;
    for (Index i = 0; i < k; ++i) largest = std::max(largest, std::abs(entries_(i, i)));
    cache_->value = NormEstimate{largest, 0, true, true};
  }
}

LinearOperator LinearOperator::identity(Index n) {
  if (n <= 0) fail(ErrorKind::kInput, "identity dimension must be positive");
  return LinearOperator(Matrix::Identity(n, n));
}

LinearOperator LinearOperator::scaled_identity(Index n, double scale) {
  if (n <= 0) fail(ErrorKind::kInput, "identity dimension must be positive");
  return LinearOperator(Matrix::Identity(n, n) * scale);
}

LinearOperator LinearOperator::diagonal(const Vector& d) {
  if (d.size() == 0) fail(ErrorKind::kInput, "diagonal must be nonempty");
  return LinearOperator(Matrix(d.asDiagonal()));
}

LinearOperator LinearOperator::sum_operator(Index m, Index dim) {
  if (m < 1 || dim < 1) fail(ErrorKind::kInput, "sum operator needs m >= 1 and dim >= 1");
  Matrix entries = Matrix::Zero(dim, m * dim);
  for (Index i = 0; i < m; ++i) entries.block(0, i * dim, dim, dim).setIdentity();
  LinearOperator op(std::move(entries));
  // ||L||^2 = m on the product space.
  op.cache_->value = NormEstimate{std::sqrt(static_cast<double>(m)), 0, true, true};
  return op;
}

LinearOperator LinearOperator::row(const Vector& a) {
  if (a.size() == 0) fail(ErrorKind::kInput, "row operator must be nonempty");
  Matrix entries(1, a.size());
  entries.row(0) = a.transpose();
  LinearOperator op(std::move(entries));
  if (!op.is_zero_) op.cache_->value = NormEstimate{a.norm(), 0, true, true};
  return op;
}

Vector LinearOperator::apply(const Vector& x) const {
  require_dim(x, cols(), "operand of apply");
  return entries_ * x;
}

Vector LinearOperator::adjoint_apply(const Vector& u) const {
  require_dim(u, rows(), "operand of adjoint_apply");
  return entries_.transpose() * u;
}

std::optional<NormEstimate> LinearOperator::cached_norm() const {
  std::lock_guard lock(cache_->mutex);
  return cache_->value;
}

NormEstimate LinearOperator::estimate_norm(double tol, int max_iter) const {
  if (is_zero_) fail(ErrorKind::kZeroOperator, "operator norm requested for the zero operator");
  if (!(tol > 0.0) || max_iter < 1) fail(ErrorKind::kInput, "norm estimation needs tol > 0 and max_iter >= 1");
  std::lock_guard lock(cache_->mutex);
  if (cache_->value) return *cache_->value;

  PowerRun run = power_iterate(entries_, Vector::Ones(cols()), tol, max_iter);
  // A second deterministic start guards against a start vector orthogonal to
  // the top singular subspace; power iteration never overestimates, so the
  // larger estimate wins.
  PowerRun check = power_iterate(entries_, perturbed_start(cols()), tol, max_iter);
  if (check.sigma > run.sigma) std::swap(run, check);

  NormEstimate estimate;
  estimate.iterations = run.iterations + check.iterations;
  estimate.converged = run.converged;
  estimate.value = run.converged ? run.sigma : run.sigma * 1.01;
  cache_->value = estimate;
  return estimate;
}

double LinearOperator::norm_bound() const {
  const NormEstimate est = estimate_norm();
  return est.exact ? est.value : est.value * (1.0 + 1e-6);
}

Vector apply(const LinearOperator& L, const Vector& x) { return L.apply(x); }
Vector adjoint_apply(const LinearOperator& L, const Vector& u) { return L.adjoint_apply(u); }

double operator_norm(const LinearOperator& L, double tol, int max_iter) {
  return L.estimate_norm(tol, max_iter).value;
}

LinearOperator sum_operator(Index m, Index space_dim) {
  return LinearOperator::sum_operator(m, space_dim);
}

}  // namespace proxkit
