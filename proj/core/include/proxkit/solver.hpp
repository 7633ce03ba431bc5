#pragma once

#include "proxkit/block_operator.hpp"
#include "proxkit/convex_set.hpp"
#include "proxkit/linear_operator.hpp"
#include "proxkit/prox_function.hpp"
#include "proxkit/smooth_function.hpp"
#include "proxkit/step_schedule.hpp"
#include "proxkit/vector.hpp"

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace proxkit {

/// Stopping rule: stop once ||x_{n+1} - x_n|| <= tol (1 + ||x_n||), or after
/// max_iter updates. Every trace_every-th iterate is kept, plus the last.
struct IterationLimits {
  std::size_t max_iter = 1000;
  double tol = 1e-10;
  std::size_t trace_every = 1;

  void validate() const;
};

struct SolverConfig {
  StepSchedule schedule;
  IterationLimits limits{};
};

enum class Termination { kTolReached, kMaxIter };
std::string_view to_string(Termination t);

/// One kept iterate. step / displacement / grad_residual describe the update
/// that produced x_n (all zero for n = 0).
struct TraceEntry {
  std::size_t n = 0;
  Vector x;
  double objective = 0.0;
  double step = 0.0;
  double displacement = 0.0;   // ||x_n - x_{n-1}||
  double grad_residual = 0.0;  // ||grad g(x_n) - grad g(x_{n-1})||
};

struct SolveReport {
  std::vector<TraceEntry> trace;
  Termination termination = Termination::kMaxIter;
  std::size_t iterations = 0;
  Vector final_point;
  /// sum over the whole run of ||x_{n+1} - x_n||^2 (not subsampled)
  double sum_sq_displacement = 0.0;

  std::vector<double> objective_trace() const;
  std::vector<double> step_trace() const;
  std::vector<double> displacements() const;
  std::vector<double> grad_residuals() const;
  bool objective_nonincreasing(double slack = 1e-10) const;
};

/// Proximal gradient (forward-backward) iteration
///   y_n = x_n - gamma_n grad g(x_n),  x_{n+1} = prox_{gamma_n f}(y_n).
/// Throws kDomain if f(x0) = +inf and kConfig if the schedule's beta is
/// below lipschitz_beta(g).
SolveReport forward_backward(const ProxFunction& f, const SmoothFunction& g, const Vector& x0,
                             const SolverConfig& cfg);

/// forward_backward with f the indicator of C; x0 must lie in C.
SolveReport projected_gradient(const ConvexSet& C, const SmoothFunction& g, const Vector& x0,
                               const SolverConfig& cfg);

/// Inertial extrapolation state with t_0 = 1, z_0 = x_0.
struct InertialState {
  double t = 1.0;
  Vector z;
  Vector x_prev;

  /// t_{n+1} = (1 + sqrt(4 t_n^2 + 1)) / 2
  static double next_t(double t);
  /// lambda_n = 1 + (t_n - 1) / t_{n+1}
  static double relaxation(double t, double t_next);
};

/// Inertial (FISTA-type) variant with the fixed step 1/beta, beta taken from
/// cfg.schedule. The objective trace is not guaranteed monotone.
SolveReport fista(const ProxFunction& f, const SmoothFunction& g, const Vector& x0,
                  const SolverConfig& cfg);

struct DualResult {
  Vector x;  // primal: prox_phi(z - L^* v)
  Vector v;  // dual
  SolveReport report;  // iterates are the dual v_n; objective is the dual objective
};

/// Solves min_x phi(x) + psi(L x - r) + ||x - z||^2 / 2 through forward-backward
/// on its Fenchel-Rockafellar dual:
///   x_n = prox_phi(z - L^* v_n),  v_{n+1} = prox_{gamma_n psi^*}(v_n + gamma_n (L x_n - r)).
/// cfg.schedule.beta must be >= ||L||^2. v0 defaults to zero when zero lies
/// in dom psi^*; otherwise it must be supplied (kDomain).
DualResult dual_forward_backward(const ProxFunction& phi, const ProxFunction& psi,
                                 const LinearOperator& L, const Vector& z, const Vector& r,
                                 const std::optional<Vector>& v0, const SolverConfig& cfg);

struct BlockResult {
  std::vector<Vector> blocks;
  SolveReport report;  // iterates are the stacked (x_1, ..., x_m)
};

/// p * max_k tau_k sum_i ||L_ki||^2 with tau_k = lipschitz_beta(h_k).
double block_lipschitz_beta(const std::vector<SmoothFunction>& h, const BlockOperator& L);

/// Blockwise forward-backward for
///   min sum_i f_i(x_i) + sum_k h_k(sum_i L_ki x_i).
/// cfg.schedule.beta must be >= block_lipschitz_beta(h, L).
BlockResult block_forward_backward(const std::vector<ProxFunction>& f,
                                   const std::vector<SmoothFunction>& h, const BlockOperator& L,
                                   const std::vector<Vector>& x0, const SolverConfig& cfg);

/// Same iteration, validated against a caller-certified Lipschitz constant
/// (e.g. the sharper sum_k sum_i ||L_ki||^2 for quadratic h_k).
BlockResult block_forward_backward(const std::vector<ProxFunction>& f,
                                   const std::vector<SmoothFunction>& h, const BlockOperator& L,
                                   const std::vector<Vector>& x0, const SolverConfig& cfg,
                                   double certified_beta);

/// ||x - prox_{gamma f}(x - gamma grad g(x))||; zero exactly at minimizers of f + g.
double fixed_point_residual(const ProxFunction& f, const SmoothFunction& g, const Vector& x,
                            double gamma);

/// Records a kept-iterate trace under IterationLimits::trace_every; shared by
/// every iteration scheme so trace shape is uniform.
class TraceRecorder {
 public:
  explicit TraceRecorder(const IterationLimits& limits) : every_(limits.trace_every) {}

  /// The objective is evaluated only for kept entries.
  template <class Objective>
  void observe(TraceEntry entry, Objective&& objective) {
    if (entry.n % every_ == 0) {
      entry.objective = objective(entry.x);
      report_.trace.push_back(std::move(entry));
      pending_.reset();
    } else {
      pending_ = std::move(entry);
    }
  }

  void add_displacement_sq(double d2) { report_.sum_sq_displacement += d2; }

  template <class Objective>
  SolveReport finish(Vector final_point, std::size_t iterations, Termination termination,
                     Objective&& objective) {
    if (pending_) {
      pending_->objective = objective(pending_->x);
      report_.trace.push_back(std::move(*pending_));
      pending_.reset();
    }
    report_.final_point = std::move(final_point);
    report_.iterations = iterations;
    report_.termination = termination;
    return std::move(report_);
  }

 private:
  std::size_t every_;
  SolveReport report_;
  std::optional<TraceEntry> pending_;
};

}  // namespace proxkit
