#include "proxkit/problems.hpp"

#include "proxkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace proxkit {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorKind::kConfig, std::string(what) + " must be > 0");
}

double squared_norm_bound(const LinearOperator& L) {
  const double n = L.norm_bound();
  return n * n;
}

StepSchedule dual_schedule(const LinearOperator& L) {
  if (L.is_zero()) fail(ErrorKind::kZeroOperator, "coupling operator L is zero");
  return StepSchedule::standard(squared_norm_bound(L));
}

}  // namespace

CompositeProblem build_lasso(const LinearOperator& L, const Vector& y) {
  if (L.is_zero()) fail(ErrorKind::kConfig, "lasso operator L is zero");
  auto g = SmoothFunction::least_squares(L, y);
  auto schedule = StepSchedule::standard(g.lipschitz_beta());
  return {ProxFunction::l1(L.cols()), std::move(g), std::move(schedule)};
}

CompositeProblem build_elastic_net(const LinearOperator& L, const Vector& y, double beta_reg) {
  require_positive(beta_reg, "elastic net weight beta");
  if (L.is_zero()) fail(ErrorKind::kConfig, "elastic net operator L is zero");
  auto g = SmoothFunction::least_squares(L, y);
  auto schedule = StepSchedule::standard(g.lipschitz_beta());
  return {ProxFunction::l1_plus_quadratic(L.cols(), beta_reg), std::move(g), std::move(schedule)};
}

ConstrainedProblem build_constrained_ls(const ConvexSet& C, const LinearOperator& L, const Vector& y) {
  if (C.dim() != L.cols()) fail(ErrorKind::kInput, "C and L act on different spaces");
  auto g = SmoothFunction::least_squares(L, y);
  auto schedule = StepSchedule::standard(g.lipschitz_beta());
  return {C, std::move(g), std::move(schedule)};
}

CompositeProblem build_envelope_relaxation(const ProxFunction& f, std::vector<EnvelopeTerm> terms) {
  if (terms.empty()) fail(ErrorKind::kConfig, "envelope relaxation needs at least one term");
  for (const auto& t : terms) {
    require_positive(t.rho, "envelope parameter rho");
    if (t.L.cols() != f.dim()) fail(ErrorKind::kInput, "envelope term operator does not act on dom f");
  }
  auto g = SmoothFunction::envelope_sum(std::move(terms));
  auto schedule = StepSchedule::standard(g.lipschitz_beta());
  return {f, std::move(g), std::move(schedule)};
}

ImageProjection project_image(const LinearOperator& L, const ConvexSet& C, const Vector& y,
                              const SolverConfig& cfg) {
  if (C.dim() != L.cols()) fail(ErrorKind::kInput, "C and L act on different spaces");
  require_dim(y, L.rows(), "point y");
  auto g = SmoothFunction::least_squares(L, y);
  auto report = projected_gradient(C, g, C.witness(), cfg);
  Vector x = report.final_point;
  Vector p = L.apply(x);
  return {std::move(p), std::move(x), std::move(report)};
}

ImageProjection project_image(const LinearOperator& L, const ConvexSet& C, const Vector& y,
                              const IterationLimits& limits) {
  if (L.is_zero()) fail(ErrorKind::kZeroOperator, "operator L is zero");
  return project_image(L, C, y, SolverConfig{StepSchedule::standard(squared_norm_bound(L)), limits});
}

MinkowskiProjection project_minkowski_sum(const std::vector<ConvexSet>& sets, const Vector& y,
                                          const SolverConfig& cfg) {
  if (sets.empty()) fail(ErrorKind::kConfig, "Minkowski sum needs at least one set");
  const Index dim = sets.front().dim();
  for (const auto& s : sets)
    if (s.dim() != dim) fail(ErrorKind::kInput, "Minkowski sum summands live in different spaces");
  require_dim(y, dim, "point y");

  const auto m = static_cast<Index>(sets.size());
  const auto product = ConvexSet::product(sets);
  auto g = SmoothFunction::least_squares(LinearOperator::sum_operator(m, dim), y);
  auto report = projected_gradient(product, g, product.witness(), cfg);

  auto components = unstack(report.final_point, std::vector<Index>(sets.size(), dim));
  Vector p = Vector::Zero(dim);
  for (const auto& c : components) p += c;
  return {std::move(p), std::move(components), std::move(report)};
}

MinkowskiProjection project_minkowski_sum(const std::vector<ConvexSet>& sets, const Vector& y,
                                          const IterationLimits& limits) {
  if (sets.empty()) fail(ErrorKind::kConfig, "Minkowski sum needs at least one set");
  const double m = static_cast<double>(sets.size());
  return project_minkowski_sum(sets, y, SolverConfig{StepSchedule::constant(m, 1.0 / m, 0.1 / m), limits});
}

AlternatingResult alternating_prox(const ProxFunction& f, const ProxFunction& h, double rho,
                                   const Vector& x0, const IterationLimits& limits) {
  require_positive(rho, "rho");
  if (f.dim() != h.dim()) fail(ErrorKind::kInput, "f and h act on different spaces");
  require_dim(x0, f.dim(), "starting point x0");
  require_finite(x0, "starting point x0");
  limits.validate();

  const auto g = SmoothFunction::envelope_sum({EnvelopeTerm{1.0, rho, LinearOperator::identity(f.dim()), h}});
  auto objective = [&](const Vector& x) { return f.value(x).value() + g.value(x); };

  TraceRecorder recorder(limits);
  recorder.observe(TraceEntry{0, x0, 0.0, 0.0, 0.0, 0.0}, objective);
  AlternatingResult out;
  Vector x = x0;
  Vector gx = g.grad(x);
  Termination termination = Termination::kMaxIter;
  std::size_t n = 0;
  while (n < limits.max_iter) {
    Vector next = f.prox(rho, h.prox(rho, x));
    const Vector fb = f.prox(rho, x - rho * gx);
    out.max_fb_deviation = std::max(out.max_fb_deviation, (next - fb).norm());
    Vector g_next = g.grad(next);
    const double displacement = (next - x).norm();
    const double grad_residual = (g_next - gx).norm();
    const bool done = displacement <= limits.tol * (1.0 + x.norm());
    recorder.add_displacement_sq(displacement * displacement);
    x = std::move(next);
    gx = std::move(g_next);
    ++n;
    recorder.observe(TraceEntry{n, x, 0.0, rho, displacement, grad_residual}, objective);
    if (done) {
      termination = Termination::kTolReached;
      break;
    }
  }
  out.report = recorder.finish(x, n, termination, objective);
  out.x = out.report.final_point;
  return out;
}

BarycentricResult barycentric_prox(const std::vector<ProxFunction>& h, double rho, const Vector& x0,
                                   const IterationLimits& limits) {
  require_positive(rho, "rho");
  if (h.empty()) fail(ErrorKind::kConfig, "barycentric prox needs at least one function");
  const Index dim = h.front().dim();
  std::vector<EnvelopeTerm> terms;
  for (const auto& hk : h) {
    if (hk.dim() != dim) fail(ErrorKind::kInput, "functions act on different spaces");
    terms.push_back(EnvelopeTerm{1.0, rho, LinearOperator::identity(dim), hk});
  }
  // Forward-backward on sum_k env(h_k) with f = 0 and gamma = rho / p gives
  // x - (rho/p) sum_k (x - prox_k x) / rho = (1/p) sum_k prox_k x.
  const double p = static_cast<double>(h.size());
  const auto g = SmoothFunction::envelope_sum(std::move(terms));
  const auto schedule = StepSchedule::constant(p / rho, rho / p);
  auto report = forward_backward(ProxFunction::zero(dim), g, x0, SolverConfig{schedule, limits});
  Vector x = report.final_point;
  return {std::move(x), std::move(report)};
}

BivariateResult bivariate_coupling(const ProxFunction& f, const ProxFunction& ell, const Vector& z,
                                   double rho, const Vector& x0, const IterationLimits& limits) {
  require_positive(rho, "rho");
  if (f.dim() != ell.dim()) fail(ErrorKind::kInput, "f and ell act on different spaces");
  require_dim(z, f.dim(), "point z");
  require_finite(z, "point z");
  // gamma = rho turns the forward step into prox of y -> ell(z - y).
  const auto g = SmoothFunction::quadratic_coupling(ell, z, rho);
  auto report = forward_backward(f, g, x0, SolverConfig{StepSchedule::constant(1.0 / rho, rho), limits});
  Vector x = report.final_point;
  Vector w = ell.prox(rho, z - x);
  return {std::move(x), std::move(w), std::move(report)};
}

DualResult best_approximation(const ConvexSet& C, const ConvexSet& D, const LinearOperator& L,
                              const Vector& z, const SolverConfig& cfg) {
  if (C.dim() != L.cols() || D.dim() != L.rows())
    fail(ErrorKind::kInput, "C, D and L have inconsistent dimensions");
  return dual_forward_backward(ProxFunction::indicator(C), ProxFunction::indicator(D), L, z,
                               Vector::Zero(L.rows()), std::nullopt, cfg);
}

DualResult best_approximation(const ConvexSet& C, const ConvexSet& D, const LinearOperator& L,
                              const Vector& z, const IterationLimits& limits) {
  return best_approximation(C, D, L, z, SolverConfig{dual_schedule(L), limits});
}

DualResult support_regularized(const ProxFunction& phi, const ConvexSet& D, const LinearOperator& L,
                               const Vector& r, const Vector& z, const SolverConfig& cfg) {
  if (!D.is_bounded()) fail(ErrorKind::kConfig, "support regularization requires a bounded set D");
  if (phi.dim() != L.cols() || D.dim() != L.rows())
    fail(ErrorKind::kInput, "phi, D and L have inconsistent dimensions");
  // psi^* is the indicator of D, so the dual iterates start inside D.
  return dual_forward_backward(phi, ProxFunction::support(D), L, z, r, D.witness(), cfg);
}

DualResult support_regularized(const ProxFunction& phi, const ConvexSet& D, const LinearOperator& L,
                               const Vector& r, const Vector& z, const IterationLimits& limits) {
  return support_regularized(phi, D, L, r, z, SolverConfig{dual_schedule(L), limits});
}

double multichannel_beta(const BlockOperator& L) {
  double total = 0.0;
  for (std::size_t k = 0; k < L.block_rows(); ++k) total += L.row_norm_sq(k);
  return total;
}

BlockResult multichannel_recovery(const std::vector<ConvexSet>& sets, const BlockOperator& L,
                                  const std::vector<Vector>& observations, const SolverConfig& cfg,
                                  const std::vector<Vector>& x0) {
  if (sets.size() != L.block_cols())
    fail(ErrorKind::kConfig, "number of sets does not match the block columns of L");
  if (observations.size() != L.block_rows())
    fail(ErrorKind::kConfig, "number of observations does not match the block rows of L");

  std::vector<ProxFunction> f;
  for (const auto& C : sets) f.push_back(ProxFunction::indicator(C));
  std::vector<SmoothFunction> h;
  for (std::size_t k = 0; k < observations.size(); ++k)
    h.push_back(SmoothFunction::least_squares(LinearOperator::identity(L.row_dims()[k]), observations[k]));

  std::vector<Vector> start = x0;
  if (start.empty())
    for (const auto& C : sets) start.push_back(C.witness());
  return block_forward_backward(f, h, L, start, cfg, multichannel_beta(L));
}

BlockResult multichannel_recovery(const std::vector<ConvexSet>& sets, const BlockOperator& L,
                                  const std::vector<Vector>& observations, const IterationLimits& limits,
                                  const std::vector<Vector>& x0) {
  const double beta = multichannel_beta(L);
  if (!(beta > 0.0)) fail(ErrorKind::kZeroOperator, "block operator is zero");
  return multichannel_recovery(sets, L, observations, SolverConfig{StepSchedule::standard(beta), limits}, x0);
}

}  // namespace proxkit
