#pragma once

#include "proxkit/block_operator.hpp"
#include "proxkit/convex_set.hpp"
#include "proxkit/linear_operator.hpp"
#include "proxkit/prox_function.hpp"
#include "proxkit/smooth_function.hpp"
#include "proxkit/solver.hpp"

#include <vector>

namespace proxkit {

/// min f + g with a step schedule already certified against lipschitz_beta(g).
struct CompositeProblem {
  ProxFunction f;
  SmoothFunction g;
  StepSchedule schedule;

  SolverConfig config(const IterationLimits& limits = {}) const { return {schedule, limits}; }
};

/// min_{x in C} g(x).
struct ConstrainedProblem {
  ConvexSet set;
  SmoothFunction g;
  StepSchedule schedule;

  ProxFunction indicator() const { return ProxFunction::indicator(set); }
  SolverConfig config(const IterationLimits& limits = {}) const { return {schedule, limits}; }
};

/// ||x||_1 + ||L x - y||^2 / 2 (iterative soft thresholding under forward_backward).
CompositeProblem build_lasso(const LinearOperator& L, const Vector& y);

/// ||x||_1 + (beta_reg/2) ||x||^2 + ||L x - y||^2 / 2.
CompositeProblem build_elastic_net(const LinearOperator& L, const Vector& y, double beta_reg);

/// min_{x in C} ||L x - y||^2 / 2 (projected Landweber under projected_gradient).
ConstrainedProblem build_constrained_ls(const ConvexSet& C, const LinearOperator& L, const Vector& y);

/// f(x) + sum_k w_k (envelope of h_k, rho_k)(L_k x), beta = sum w_k ||L_k||^2 / rho_k.
CompositeProblem build_envelope_relaxation(const ProxFunction& f, std::vector<EnvelopeTerm> terms);

struct ImageProjection {
  Vector projection;  // p = L x
  Vector preimage;    // x in C
  SolveReport report;
};

/// Projection of y onto L(C) by projected Landweber; L(C) must be closed
/// (not checked).
ImageProjection project_image(const LinearOperator& L, const ConvexSet& C, const Vector& y,
                              const SolverConfig& cfg);
ImageProjection project_image(const LinearOperator& L, const ConvexSet& C, const Vector& y,
                              const IterationLimits& limits = {});

struct MinkowskiProjection {
  Vector projection;               // sum of the components
  std::vector<Vector> components;  // c_i in C_i
  SolveReport report;              // product-space iterates
};

/// Projection of y onto C_1 + ... + C_m, computed on the product space with
/// the sum operator. The sum must be closed (not checked). Default steps
/// gamma = 1/m, epsilon = 0.1/m.
MinkowskiProjection project_minkowski_sum(const std::vector<ConvexSet>& sets, const Vector& y,
                                          const SolverConfig& cfg);
MinkowskiProjection project_minkowski_sum(const std::vector<ConvexSet>& sets, const Vector& y,
                                          const IterationLimits& limits = {});

struct AlternatingResult {
  Vector x;
  SolveReport report;  // objective f + envelope(h, rho)
  /// Largest per-iteration gap between the composition update and the
  /// envelope forward-backward update at gamma = rho.
  double max_fb_deviation = 0.0;
};

/// x_{n+1} = prox_{rho f}(prox_{rho h}(x_n)); with indicators this is the
/// method of alternating projections.
AlternatingResult alternating_prox(const ProxFunction& f, const ProxFunction& h, double rho,
                                   const Vector& x0, const IterationLimits& limits = {});

struct BarycentricResult {
  Vector x;
  SolveReport report;  // objective sum_k envelope(h_k, rho)
};

/// x_{n+1} = (1/p) sum_k prox_{rho h_k}(x_n).
BarycentricResult barycentric_prox(const std::vector<ProxFunction>& h, double rho, const Vector& x0,
                                   const IterationLimits& limits = {});

struct BivariateResult {
  Vector x;
  Vector w;  // prox_{rho ell}(z - x)
  SolveReport report;
};

/// min_{x, w} f(x) + ell(w) + ||x + w - z||^2 / (2 rho), via
/// x_{n+1} = prox_{rho f}(z - prox_{rho ell}(z - x_n)).
BivariateResult bivariate_coupling(const ProxFunction& f, const ProxFunction& ell, const Vector& z,
                                   double rho, const Vector& x0, const IterationLimits& limits = {});

/// Projection of z onto C ∩ L^{-1}(D) via the dual iteration; returns the
/// primal point x and dual certificate v with x = proj_C(z - L^* v).
DualResult best_approximation(const ConvexSet& C, const ConvexSet& D, const LinearOperator& L,
                              const Vector& z, const SolverConfig& cfg);
DualResult best_approximation(const ConvexSet& C, const ConvexSet& D, const LinearOperator& L,
                              const Vector& z, const IterationLimits& limits = {});

/// min_x phi(x) + sigma_D(L x - r) + ||x - z||^2 / 2 for compact D; dual
/// update v_{n+1} = proj_D(v_n + gamma_n (L x_n - r)).
DualResult support_regularized(const ProxFunction& phi, const ConvexSet& D, const LinearOperator& L,
                               const Vector& r, const Vector& z, const SolverConfig& cfg);
DualResult support_regularized(const ProxFunction& phi, const ConvexSet& D, const LinearOperator& L,
                               const Vector& r, const Vector& z, const IterationLimits& limits = {});

/// sum_k sum_i ||L_ki||^2, the Lipschitz constant used for multichannel recovery.
double multichannel_beta(const BlockOperator& L);

/// min_{x_i in C_i} (1/2) sum_k ||y_k - sum_i L_ki x_i||^2 by blockwise
/// projected gradient. x0 defaults to the witnesses of the C_i.
BlockResult multichannel_recovery(const std::vector<ConvexSet>& sets, const BlockOperator& L,
                                  const std::vector<Vector>& observations, const SolverConfig& cfg,
                                  const std::vector<Vector>& x0 = {});
BlockResult multichannel_recovery(const std::vector<ConvexSet>& sets, const BlockOperator& L,
                                  const std::vector<Vector>& observations,
                                  const IterationLimits& limits = {},
                                  const std::vector<Vector>& x0 = {});

}  // namespace proxkit
