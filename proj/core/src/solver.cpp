#include "proxkit/solver.hpp"

#include "proxkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace proxkit {

void IterationLimits::validate() const {
  if (max_iter < 1) fail(ErrorKind::kConfig, "max_iter must be >= 1");
  if (!(tol > 0.0) || !std::isfinite(tol)) fail(ErrorKind::kConfig, "tol must be > 0");
  if (trace_every < 1) fail(ErrorKind::kConfig, "trace_every must be >= 1");
}

std::string_view to_string(Termination t) {
  return t == Termination::kTolReached ? "tol_reached" : "max_iter";
}

namespace {

template <class Field>
std::vector<double> collect(const std::vector<TraceEntry>& trace, Field field) {
  std::vector<double> out;
  out.reserve(trace.size());
  for (const auto& e : trace) out.push_back(e.*field);
  return out;
}

double extended(ExtendedReal v) { return v.value(); }

bool small_step(double displacement, const Vector& x, double tol) {
  return displacement <= tol * (1.0 + x.norm());
}

void require_beta_covers(const StepSchedule& schedule, double beta, const char* what) {
  if (schedule.beta() < beta * (1.0 - 1e-12)) {
    std::ostringstream os;
    os.precision(12);
    os << "schedule beta " << schedule.beta() << " is below the Lipschitz constant " << beta << " of "
       << what;
    fail(ErrorKind::kConfig, os.str());
  }
}

// y_n = x_n - gamma_n grad(x_n); x_{n+1} = prox(gamma_n, y_n). The gradient
// at the new point is reused by the next step.
template <class Grad, class Prox, class Objective>
SolveReport run_forward_backward(Grad&& grad, Prox&& prox_step, Objective&& objective, Vector x,
                                 const StepSchedule& schedule, const IterationLimits& limits) {
  limits.validate();
  TraceRecorder recorder(limits);
  Vector gx = grad(x);
  recorder.observe(TraceEntry{0, x, 0.0, 0.0, 0.0, 0.0}, objective);

  Termination termination = Termination::kMaxIter;
  std::size_t n = 0;
  while (n < limits.max_iter) {
    const double gamma = schedule.step(n);
    const Vector y = x - gamma * gx;
    Vector next = prox_step(gamma, y);
    Vector g_next = grad(next);
    const double displacement = (next - x).norm();
    const double grad_residual = (g_next - gx).norm();
    const bool done = small_step(displacement, x, limits.tol);
    recorder.add_displacement_sq(displacement * displacement);
    x = std::move(next);
    gx = std::move(g_next);
    ++n;
    recorder.observe(TraceEntry{n, x, 0.0, gamma, displacement, grad_residual}, objective);
    if (done) {
      termination = Termination::kTolReached;
      break;
    }
  }
  return recorder.finish(x, n, termination, objective);
}

void check_start(const ProxFunction& f, const SmoothFunction& g, const Vector& x0) {
  require_dim(x0, f.dim(), "starting point x0");
  require_finite(x0, "starting point x0");
  if (g.dim() != f.dim()) fail(ErrorKind::kInput, "f and g act on different spaces");
  if (f.value(x0).is_infinite())
    fail(ErrorKind::kDomain, "starting point x0 is outside dom f (f(x0) = +inf)");
}

}  // namespace

std::vector<double> SolveReport::objective_trace() const { return collect(trace, &TraceEntry::objective); }
std::vector<double> SolveReport::step_trace() const { return collect(trace, &TraceEntry::step); }
std::vector<double> SolveReport::displacements() const { return collect(trace, &TraceEntry::displacement); }
std::vector<double> SolveReport::grad_residuals() const { return collect(trace, &TraceEntry::grad_residual); }

bool SolveReport::objective_nonincreasing(double slack) const {
  for (std::size_t i = 1; i < trace.size(); ++i)
    if (trace[i].objective > trace[i - 1].objective + slack) return false;
  return true;
}

SolveReport forward_backward(const ProxFunction& f, const SmoothFunction& g, const Vector& x0,
                             const SolverConfig& cfg) {
  check_start(f, g, x0);
  require_beta_covers(cfg.schedule, g.lipschitz_beta(), "grad g");
  return run_forward_backward([&](const Vector& x) { return g.grad(x); },
                              [&](double gamma, const Vector& y) { return f.prox(gamma, y); },
                              [&](const Vector& x) { return extended(f.value(x)) + g.value(x); }, x0,
                              cfg.schedule, cfg.limits);
}

SolveReport projected_gradient(const ConvexSet& C, const SmoothFunction& g, const Vector& x0,
                               const SolverConfig& cfg) {
  require_dim(x0, C.dim(), "starting point x0");
  require_finite(x0, "starting point x0");
  if (g.dim() != C.dim()) fail(ErrorKind::kInput, "C and g live in different spaces");
  if (!C.contains(x0)) fail(ErrorKind::kDomain, "starting point x0 is not in C");
  require_beta_covers(cfg.schedule, g.lipschitz_beta(), "grad g");
  return run_forward_backward([&](const Vector& x) { return g.grad(x); },
                              [&](double, const Vector& y) { return C.project(y); },
                              [&](const Vector& x) { return g.value(x); }, x0, cfg.schedule,
                              cfg.limits);
}

double InertialState::next_t(double t) { return (1.0 + std::sqrt(4.0 * t * t + 1.0)) / 2.0; }

double InertialState::relaxation(double t, double t_next) { return 1.0 + (t - 1.0) / t_next; }

SolveReport fista(const ProxFunction& f, const SmoothFunction& g, const Vector& x0,
                  const SolverConfig& cfg) {
  check_start(f, g, x0);
  require_beta_covers(cfg.schedule, g.lipschitz_beta(), "grad g");
  cfg.limits.validate();
  const double gamma = 1.0 / cfg.schedule.beta();
  auto objective = [&](const Vector& x) { return extended(f.value(x)) + g.value(x); };

  TraceRecorder recorder(cfg.limits);
  recorder.observe(TraceEntry{0, x0, 0.0, 0.0, 0.0, 0.0}, objective);
  InertialState state{1.0, x0, x0};
  Vector x = x0;
  Vector gx = g.grad(x);
  Termination termination = Termination::kMaxIter;
  std::size_t n = 0;
  while (n < cfg.limits.max_iter) {
    const Vector y = state.z - gamma * g.grad(state.z);
    Vector next = f.prox(gamma, y);
    const double t_next = InertialState::next_t(state.t);
    const double lambda = InertialState::relaxation(state.t, t_next);
    state.z = x + lambda * (next - x);
    state.t = t_next;
    state.x_prev = x;

    Vector g_next = g.grad(next);
    const double displacement = (next - x).norm();
    const double grad_residual = (g_next - gx).norm();
    const bool done = small_step(displacement, x, cfg.limits.tol);
    recorder.add_displacement_sq(displacement * displacement);
    x = std::move(next);
    gx = std::move(g_next);
    ++n;
    recorder.observe(TraceEntry{n, x, 0.0, gamma, displacement, grad_residual}, objective);
    if (done) {
      termination = Termination::kTolReached;
      break;
    }
  }
  return recorder.finish(x, n, termination, objective);
}

DualResult dual_forward_backward(const ProxFunction& phi, const ProxFunction& psi,
                                 const LinearOperator& L, const Vector& z, const Vector& r,
                                 const std::optional<Vector>& v0, const SolverConfig& cfg) {
  if (L.is_zero()) fail(ErrorKind::kZeroOperator, "dual forward-backward needs a nonzero L");
  if (phi.dim() != L.cols()) fail(ErrorKind::kInput, "phi does not act on the domain of L");
  if (psi.dim() != L.rows()) fail(ErrorKind::kInput, "psi does not act on the range of L");
  require_dim(z, L.cols(), "anchor z");
  require_dim(r, L.rows(), "offset r");
  require_finite(z, "anchor z");
  require_finite(r, "offset r");
  const double norm = L.norm_bound();
  require_beta_covers(cfg.schedule, norm * norm, "the dual smooth term (||L||^2)");
  cfg.limits.validate();

  Vector v = v0.value_or(Vector::Zero(L.rows()));
  require_dim(v, L.rows(), "dual starting point v0");
  require_finite(v, "dual starting point v0");
  if (conjugate_value(psi, v).is_infinite()) {
    fail(ErrorKind::kDomain, v0 ? "dual starting point v0 is outside dom psi^*"
                                : "zero is outside dom psi^*; supply a dual starting point v0");
  }

  auto primal = [&](const Vector& dual) { return phi.prox(1.0, z - L.adjoint_apply(dual)); };
  // moreau(phi^*, 1)(u) = ||u||^2/2 - moreau(phi, 1)(u)
  auto objective = [&](const Vector& dual) {
    const Vector u = z - L.adjoint_apply(dual);
    return 0.5 * u.squaredNorm() - moreau_value(phi, 1.0, u) + conjugate_value(psi, dual).value() +
           dual.dot(r);
  };

  TraceRecorder recorder(cfg.limits);
  recorder.observe(TraceEntry{0, v, 0.0, 0.0, 0.0, 0.0}, objective);
  Vector x = primal(v);
  Vector lx = L.apply(x);
  Termination termination = Termination::kMaxIter;
  std::size_t n = 0;
  while (n < cfg.limits.max_iter) {
    const double gamma = cfg.schedule.step(n);
    Vector next = prox_conjugate(psi, gamma, v + gamma * (lx - r));
    Vector x_next = primal(next);
    Vector lx_next = L.apply(x_next);
    const double displacement = (next - v).norm();
    const double grad_residual = (lx_next - lx).norm();  // grad of dual smooth part is -L x(v)
    const bool done = small_step(displacement, v, cfg.limits.tol);
    recorder.add_displacement_sq(displacement * displacement);
    v = std::move(next);
    x = std::move(x_next);
    lx = std::move(lx_next);
    ++n;
    recorder.observe(TraceEntry{n, v, 0.0, gamma, displacement, grad_residual}, objective);
    if (done) {
      termination = Termination::kTolReached;
      break;
    }
  }
  DualResult result;
  result.report = recorder.finish(v, n, termination, objective);
  result.v = std::move(v);
  result.x = std::move(x);
  return result;
}

double block_lipschitz_beta(const std::vector<SmoothFunction>& h, const BlockOperator& L) {
  if (h.size() != L.block_rows()) fail(ErrorKind::kConfig, "one coupling term h_k per block row");
  double worst = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k)
    worst = std::max(worst, h[k].lipschitz_beta() * L.row_norm_sq(k));
  return static_cast<double>(h.size()) * worst;
}

BlockResult block_forward_backward(const std::vector<ProxFunction>& f,
                                   const std::vector<SmoothFunction>& h, const BlockOperator& L,
                                   const std::vector<Vector>& x0, const SolverConfig& cfg) {
  if (h.size() != L.block_rows()) fail(ErrorKind::kConfig, "one coupling term h_k per block row");
  L.require_coupled_rows();
  return block_forward_backward(f, h, L, x0, cfg, block_lipschitz_beta(h, L));
}

BlockResult block_forward_backward(const std::vector<ProxFunction>& f,
                                   const std::vector<SmoothFunction>& h, const BlockOperator& L,
                                   const std::vector<Vector>& x0, const SolverConfig& cfg,
                                   double certified_beta) {
  const std::size_t m = L.block_cols();
  const std::size_t p = L.block_rows();
  if (f.size() != m) fail(ErrorKind::kConfig, "one separable term f_i per block column");
  if (h.size() != p) fail(ErrorKind::kConfig, "one coupling term h_k per block row");
  if (x0.size() != m) fail(ErrorKind::kConfig, "one starting block x0_i per block column");
  L.require_coupled_rows();
  for (std::size_t i = 0; i < m; ++i) {
    if (f[i].dim() != L.col_dims()[i]) fail(ErrorKind::kConfig, "f_i dimension does not match block column");
    if (x0[i].size() != L.col_dims()[i]) fail(ErrorKind::kConfig, "x0_i dimension does not match block column");
    require_finite(x0[i], "starting block x0_i");
    if (f[i].value(x0[i]).is_infinite())
      fail(ErrorKind::kDomain, "starting block x0_" + std::to_string(i) + " is outside dom f_i");
  }
  for (std::size_t k = 0; k < p; ++k)
    if (h[k].dim() != L.row_dims()[k]) fail(ErrorKind::kConfig, "h_k dimension does not match block row");
  require_beta_covers(cfg.schedule, certified_beta, "the coupling term");

  const std::vector<Index>& dims = L.col_dims();
  auto grad = [&](const Vector& stacked_x) {
    const std::vector<Vector> s = L.apply(unstack(stacked_x, dims));
    std::vector<Vector> u;
    u.reserve(p);
    for (std::size_t k = 0; k < p; ++k) u.push_back(h[k].grad(s[k]));
    return stack(L.adjoint_apply(u));
  };
  auto prox_step = [&](double gamma, const Vector& y) {
    std::vector<Vector> parts = unstack(y, dims);
    for (std::size_t i = 0; i < m; ++i) parts[i] = f[i].prox(gamma, parts[i]);
    return stack(parts);
  };
  auto objective = [&](const Vector& stacked_x) {
    const std::vector<Vector> xs = unstack(stacked_x, dims);
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) total += extended(f[i].value(xs[i]));
    const std::vector<Vector> s = L.apply(xs);
    for (std::size_t k = 0; k < p; ++k) total += h[k].value(s[k]);
    return total;
  };

  BlockResult result;
  result.report = run_forward_backward(grad, prox_step, objective, stack(x0), cfg.schedule, cfg.limits);
  result.blocks = unstack(result.report.final_point, dims);
  return result;
}

double fixed_point_residual(const ProxFunction& f, const SmoothFunction& g, const Vector& x,
                            double gamma) {
  return (x - f.prox(gamma, x - gamma * g.grad(x))).norm();
}

}  // namespace proxkit
