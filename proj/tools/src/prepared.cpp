#include "proxkit_cli/prepared.hpp"

#include "proxkit_cli/decode.hpp"

#include "proxkit/errors.hpp"
#include "proxkit/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace proxkit::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class Build>
auto checked(const Field& field, Build&& build) {
  try {
    return build();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    field.error(e.what());
  }
}

void allow(const ProblemFile& problem, std::initializer_list<Algorithm> algorithms) {
  for (auto a : algorithms)
    if (a == problem.solver.algorithm) return;
  std::string names;
  for (auto a : algorithms) names += (names.empty() ? "" : ", ") + std::string(to_string(a));
  throw ParseError("solver.algorithm", "algorithm '" + std::string(to_string(problem.solver.algorithm)) +
                                           "' is not available for kind " +
                                           std::string(to_string(problem.kind)) + " (use " + names + ")");
}

Vector start_point(const Field& payload, const Vector& fallback) {
  if (auto f = payload.find("x0")) {
    Vector x0 = f->vector();
    require_length(*f, x0, fallback.size());
    return x0;
  }
  return fallback;
}

double half_sq(const Vector& r) { return 0.5 * r.squaredNorm(); }

double set_penalty(const ConvexSet& C, const Vector& x) { return C.contains(x) ? 0.0 : kInf; }

LinearOperator nonzero_operator(const Field& field) {
  auto L = decode_operator(field);
  if (L.is_zero()) field.error("operator must be nonzero");
  return L;
}

double squared_norm(const LinearOperator& L) {
  const double n = L.norm_bound();
  return n * n;
}

void set_base(PreparedProblem& out, const ProblemFile& problem) {
  out.kind = problem.kind;
  out.algorithm = problem.solver.algorithm;
  out.step_policy = out.algorithm == Algorithm::kFista ? StepPolicy::kInverseBeta : StepPolicy::kUser;
  out.monotone = out.algorithm != Algorithm::kFista;
}

// f + g solved by forward-backward, FISTA, or projected gradient when f is
// the indicator of `set`.
PreparedProblem composite(const ProblemFile& problem, ProxFunction f, SmoothFunction g, Vector x0,
                          std::optional<ConvexSet> set) {
  PreparedProblem out;
  set_base(out, problem);
  out.dim = f.dim();
  // Any positive constant certifies a zero gradient; 1 keeps "auto" at gamma = 1.
  out.beta = g.lipschitz_beta() > 0.0 ? g.lipschitz_beta() : 1.0;
  out.trace_objective = "f(x_n) + g(x_n)";
  out.functions.push_back({"f", f});
  out.smooth.push_back({"g", g});
  if (set) out.sets.push_back({"C", *set});
  out.primal_objective = [f, g](const Vector& x) { return f.value(x).value() + g.value(x); };
  const Algorithm algorithm = problem.solver.algorithm;
  out.solve = [f, g, x0, set, algorithm](const SolverConfig& cfg) {
    RunOutcome r;
    if (algorithm == Algorithm::kFista)
      r.report = fista(f, g, x0, cfg);
    else if (algorithm == Algorithm::kProjected)
      r.report = projected_gradient(*set, g, x0, cfg);
    else
      r.report = forward_backward(f, g, x0, cfg);
    r.point = r.primal = r.report.final_point;
    return r;
  };
  return out;
}

PreparedProblem prepare_lasso(const ProblemFile& problem, const Field& p, bool elastic) {
  allow(problem, {Algorithm::kFb, Algorithm::kFista});
  auto L = nonzero_operator(p["L"]);
  Vector y = p["y"].vector();
  require_length(p["y"], y, L.rows());
  auto built = elastic ? checked(p["beta"], [&] { return build_elastic_net(L, y, p["beta"].positive()); })
                       : build_lasso(L, y);
  auto out = composite(problem, built.f, built.g, start_point(p, Vector::Zero(L.cols())), std::nullopt);
  out.operators.push_back({"L", L});
  return out;
}

PreparedProblem prepare_constrained_ls(const ProblemFile& problem, const Field& p) {
  allow(problem, {Algorithm::kProjected, Algorithm::kFb, Algorithm::kFista});
  auto C = decode_set(p["C"]);
  auto L = nonzero_operator(p["L"]);
  if (L.cols() != C.dim()) p["L"]["cols"].error("does not match the dimension of C");
  Vector y = p["y"].vector();
  require_length(p["y"], y, L.rows());
  auto built = build_constrained_ls(C, L, y);
  auto out = composite(problem, built.indicator(), built.g, start_point(p, C.witness()), C);
  out.operators.push_back({"L", L});
  return out;
}

PreparedProblem prepare_envelope(const ProblemFile& problem, const Field& p) {
  allow(problem, {Algorithm::kFb, Algorithm::kFista});
  auto f = decode_function(p["f"]);
  std::vector<EnvelopeTerm> terms;
  const Field tf = p["terms"];
  if (tf.size() == 0) tf.error("needs at least one term");
  for (const auto& t : tf.elements()) {
    terms.push_back(decode_envelope_term(t));
    if (terms.back().L.cols() != f.dim()) t.error("term operator does not act on the space of f");
    if (terms.back().L.is_zero()) t.error("term operator must be nonzero");
  }
  auto built = checked(tf, [&] { return build_envelope_relaxation(f, terms); });
  auto out = composite(problem, built.f, built.g, start_point(p, f.feasible_point()), std::nullopt);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    out.operators.push_back({"terms[" + std::to_string(k) + "].L", terms[k].L});
    out.functions.push_back({"terms[" + std::to_string(k) + "].h", terms[k].h});
  }
  return out;
}

PreparedProblem prepare_custom(const ProblemFile& problem, const Field& p) {
  auto f = decode_function(p["f"]);
  auto g = decode_smooth(p["g"]);
  if (g.dim() != f.dim()) p["g"].error("acts on a different space than f");
  std::optional<ConvexSet> set;
  if (const auto* ind = std::get_if<ProxFunction::Indicator>(&f.kind())) set = ind->set;
  if (set)
    allow(problem, {Algorithm::kFb, Algorithm::kFista, Algorithm::kProjected});
  else
    allow(problem, {Algorithm::kFb, Algorithm::kFista});
  return composite(problem, f, g, start_point(p, f.feasible_point()), set);
}

PreparedProblem prepare_minkowski(const ProblemFile& problem, const Field& p) {
  allow(problem, {Algorithm::kProjected});
  std::vector<ConvexSet> sets;
  const Field sf = p["sets"];
  for (const auto& s : sf.elements()) sets.push_back(decode_set(s));
  if (sets.empty()) sf.error("needs at least one set");
  const Index n = sets.front().dim();
  for (std::size_t i = 0; i < sets.size(); ++i)
    if (sets[i].dim() != n) sf.at(i).error("lives in a different space than sets[0]");
  Vector y = p["y"].vector();
  require_length(p["y"], y, n);

  PreparedProblem out;
  set_base(out, problem);
  const auto m = static_cast<Index>(sets.size());
  out.dim = m * n;
  out.beta = static_cast<double>(m);
  out.trace_objective = "||x_1 + ... + x_m - y||^2 / 2";
  const auto product = ConvexSet::product(sets);
  const auto sum = LinearOperator::sum_operator(m, n);
  for (std::size_t i = 0; i < sets.size(); ++i) out.sets.push_back({"sets[" + std::to_string(i) + "]", sets[i]});
  out.smooth.push_back({"g", SmoothFunction::least_squares(sum, y)});
  out.operators.push_back({"sum", sum});
  out.primal_objective = [product, sum, y](const Vector& x) {
    return set_penalty(product, x) + half_sq(sum.apply(x) - y);
  };
  out.solve = [sets, y](const SolverConfig& cfg) {
    auto res = project_minkowski_sum(sets, y, cfg);
    RunOutcome r{std::move(res.report), res.projection, {}, {}};
    r.primal = r.report.final_point;
    for (std::size_t i = 0; i < res.components.size(); ++i)
      r.extras.emplace_back("components[" + std::to_string(i) + "]", res.components[i]);
    return r;
  };
  return out;
}

PreparedProblem prepare_image(const ProblemFile& problem, const Field& p) {
  allow(problem, {Algorithm::kProjected});
  auto L = nonzero_operator(p["L"]);
  auto C = decode_set(p["C"]);
  if (L.cols() != C.dim()) p["L"]["cols"].error("does not match the dimension of C");
  Vector y = p["y"].vector();
  require_length(p["y"], y, L.rows());

  PreparedProblem out;
  set_base(out, problem);
  out.dim = C.dim();
  out.beta = squared_norm(L);
  out.trace_objective = "||L x_n - y||^2 / 2";
  out.sets.push_back({"C", C});
  out.smooth.push_back({"g", SmoothFunction::least_squares(L, y)});
  out.operators.push_back({"L", L});
  out.primal_objective = [C, L, y](const Vector& x) { return set_penalty(C, x) + half_sq(L.apply(x) - y); };
  out.solve = [L, C, y](const SolverConfig& cfg) {
    auto res = project_image(L, C, y, cfg);
    RunOutcome r{std::move(res.report), res.projection, res.preimage, {}};
    r.extras.emplace_back("preimage", res.preimage);
    return r;
  };
  return out;
}

void prescribe(PreparedProblem& out, StepSchedule schedule, std::string rule) {
  out.step_policy = StepPolicy::kPrescribed;
  out.beta = schedule.beta();
  out.prescribed = std::move(schedule);
  out.prescribed_rule = std::move(rule);
}

PreparedProblem prepare_alternating(const ProblemFile& problem, const Field& p) {
  allow(problem, {Algorithm::kFb});
  auto f = decode_function(p["f"]);
  auto h = decode_function(p["h"]);
  if (h.dim() != f.dim()) p["h"].error("acts on a different space than f");
  const double rho = p["rho"].positive();
  Vector x0 = start_point(p, f.feasible_point());

  PreparedProblem out;
  set_base(out, problem);
  out.dim = f.dim();
  prescribe(out, StepSchedule::constant(1.0 / rho, rho), "gamma = rho");
  out.trace_objective = "f(x_n) + env_rho h(x_n)";
  out.functions = {{"f", f}, {"h", h}};
  const auto g = SmoothFunction::envelope_sum({EnvelopeTerm{1.0, rho, LinearOperator::identity(f.dim()), h}});
  out.smooth.push_back({"env_rho h", g});
  out.primal_objective = [f, g](const Vector& x) { return f.value(x).value() + g.value(x); };
  out.solve = [f, h, rho, x0](const SolverConfig& cfg) {
    auto res = alternating_prox(f, h, rho, x0, cfg.limits);
    RunOutcome r{std::move(res.report), res.x, res.x, {}};
    r.extras.emplace_back("max_fb_deviation", Vector::Constant(1, res.max_fb_deviation));
    return r;
  };
  return out;
}

PreparedProblem prepare_barycentric(const ProblemFile& problem, const Field& p) {
  allow(problem, {Algorithm::kFb});
  std::vector<ProxFunction> hs;
  const Field hf = p["h"];
  for (const auto& h : hf.elements()) hs.push_back(decode_function(h));
  if (hs.empty()) hf.error("needs at least one function");
  for (std::size_t k = 0; k < hs.size(); ++k)
    if (hs[k].dim() != hs[0].dim()) hf.at(k).error("acts on a different space than h[0]");
  const double rho = p["rho"].positive();
  Vector x0 = start_point(p, hs[0].feasible_point());

  PreparedProblem out;
  set_base(out, problem);
  out.dim = hs[0].dim();
  const double count = static_cast<double>(hs.size());
  prescribe(out, StepSchedule::constant(count / rho, rho / count), "gamma = rho / p");
  out.trace_objective = "sum_k env_rho h_k(x_n)";
  std::vector<EnvelopeTerm> terms;
  for (std::size_t k = 0; k < hs.size(); ++k) {
    out.functions.push_back({"h[" + std::to_string(k) + "]", hs[k]});
    terms.push_back(EnvelopeTerm{1.0, rho, LinearOperator::identity(out.dim), hs[k]});
  }
  const auto g = SmoothFunction::envelope_sum(terms);
  out.smooth.push_back({"sum_k env_rho h_k", g});
  out.primal_objective = [g](const Vector& x) { return g.value(x); };
  out.solve = [hs, rho, x0](const SolverConfig& cfg) {
    auto res = barycentric_prox(hs, rho, x0, cfg.limits);
    return RunOutcome{std::move(res.report), res.x, res.x, {}};
  };
  return out;
}

PreparedProblem prepare_bivariate(const ProblemFile& problem, const Field& p) {
  allow(problem, {Algorithm::kFb});
  auto f = decode_function(p["f"]);
  auto ell = decode_function(p["ell"]);
  if (ell.dim() != f.dim()) p["ell"].error("acts on a different space than f");
  Vector z = p["z"].vector();
  require_length(p["z"], z, f.dim());
  const double rho = p["rho"].positive();
  Vector x0 = start_point(p, f.feasible_point());

  PreparedProblem out;
  set_base(out, problem);
  out.dim = f.dim();
  prescribe(out, StepSchedule::constant(1.0 / rho, rho), "gamma = rho");
  out.trace_objective = "f(x_n) + min_w [ell(w) + ||x_n + w - z||^2 / (2 rho)]";
  out.functions = {{"f", f}, {"ell", ell}};
  const auto g = SmoothFunction::quadratic_coupling(ell, z, rho);
  out.smooth.push_back({"coupling", g});
  out.primal_objective = [f, g](const Vector& x) { return f.value(x).value() + g.value(x); };
  out.solve = [f, ell, z, rho, x0](const SolverConfig& cfg) {
    auto res = bivariate_coupling(f, ell, z, rho, x0, cfg.limits);
    RunOutcome r{std::move(res.report), res.x, res.x, {}};
    r.extras.emplace_back("w", res.w);
    return r;
  };
  return out;
}

PreparedProblem dual_problem(const ProblemFile& problem, ProxFunction phi, ProxFunction psi,
                             LinearOperator L, Vector z, Vector r) {
  PreparedProblem out;
  set_base(out, problem);
  out.dim = L.cols();
  out.beta = squared_norm(L);
  out.trace_objective = "dual objective at v_n";
  out.functions = {{"phi", phi}, {"psi", psi}, {"psi^*", ProxFunction::conjugate(psi)}};
  out.operators.push_back({"L", L});
  out.primal_objective = [phi, psi, L, z, r](const Vector& x) {
    return phi.value(x).value() + psi.value(L.apply(x) - r).value() + half_sq(x - z);
  };
  return out;
}

PreparedProblem prepare_best_approximation(const ProblemFile& problem, const Field& p) {
  allow(problem, {Algorithm::kDual});
  auto C = decode_set(p["C"]);
  auto D = decode_set(p["D"]);
  auto L = p.has("L") ? nonzero_operator(p["L"]) : LinearOperator::identity(C.dim());
  if (L.cols() != C.dim()) p["L"]["cols"].error("does not match the dimension of C");
  if (L.rows() != D.dim()) p["L"]["rows"].error("does not match the dimension of D");
  Vector z = p["z"].vector();
  require_length(p["z"], z, C.dim());

  auto out = dual_problem(problem, ProxFunction::indicator(C), ProxFunction::indicator(D), L, z,
                          Vector::Zero(L.rows()));
  out.sets = {{"C", C}, {"D", D}};
  out.solve = [C, D, L, z](const SolverConfig& cfg) {
    auto res = best_approximation(C, D, L, z, cfg);
    RunOutcome r{std::move(res.report), res.x, res.x, {}};
    r.extras.emplace_back("v", res.v);
    return r;
  };
  return out;
}

PreparedProblem prepare_support_regularized(const ProblemFile& problem, const Field& p) {
  allow(problem, {Algorithm::kDual});
  auto phi = decode_function(p["phi"]);
  auto D = decode_set(p["D"]);
  if (!D.is_bounded()) p["D"].error("must be bounded (the support term needs a compact set)");
  auto L = p.has("L") ? nonzero_operator(p["L"]) : LinearOperator::identity(phi.dim());
  if (L.cols() != phi.dim()) p["L"]["cols"].error("does not match the dimension of phi");
  if (L.rows() != D.dim()) p["L"]["rows"].error("does not match the dimension of D");
  Vector z = p["z"].vector();
  require_length(p["z"], z, phi.dim());
  Vector r = p.has("r") ? p["r"].vector() : Vector::Zero(L.rows());
  if (p.has("r")) require_length(p["r"], r, L.rows());

  auto out = dual_problem(problem, phi, ProxFunction::support(D), L, z, r);
  out.sets = {{"D", D}};
  out.solve = [phi, D, L, r, z](const SolverConfig& cfg) {
    auto res = support_regularized(phi, D, L, r, z, cfg);
    RunOutcome out_run{std::move(res.report), res.x, res.x, {}};
    out_run.extras.emplace_back("v", res.v);
    return out_run;
  };
  return out;
}

PreparedProblem prepare_multichannel(const ProblemFile& problem, const Field& p) {
  allow(problem, {Algorithm::kBlock});
  std::vector<ConvexSet> sets;
  for (const auto& s : p["sets"].elements()) sets.push_back(decode_set(s));
  auto L = decode_block_operator(p["L"]);
  if (sets.size() != L.block_cols()) p["sets"].error("count does not match L.col_dims");
  for (std::size_t i = 0; i < sets.size(); ++i)
    if (sets[i].dim() != L.col_dims()[i]) p["sets"].at(i).error("dimension does not match L.col_dims");
  std::vector<Vector> ys;
  const Field yf = p["y"];
  if (yf.size() != L.block_rows()) yf.error("count does not match L.row_dims");
  for (std::size_t k = 0; k < yf.size(); ++k) {
    ys.push_back(yf.at(k).vector());
    require_length(yf.at(k), ys.back(), L.row_dims()[k]);
  }
  checked(p["L"], [&] {
    L.require_coupled_rows();
    return 0;
  });
  std::vector<Vector> x0;
  if (auto xf = p.find("x0")) {
    if (xf->size() != sets.size()) xf->error("count does not match the number of sets");
    for (std::size_t i = 0; i < sets.size(); ++i) {
      x0.push_back(xf->at(i).vector());
      require_length(xf->at(i), x0.back(), sets[i].dim());
    }
  }

  PreparedProblem out;
  set_base(out, problem);
  out.dim = L.total_cols();
  out.beta = multichannel_beta(L);
  out.trace_objective = "(1/2) sum_k ||y_k - sum_i L_ki x_i||^2";
  for (std::size_t i = 0; i < sets.size(); ++i) out.sets.push_back({"sets[" + std::to_string(i) + "]", sets[i]});
  for (std::size_t k = 0; k < L.block_rows(); ++k)
    for (std::size_t i = 0; i < L.block_cols(); ++i)
      if (L.block(k, i))
        out.operators.push_back({"L[" + std::to_string(k) + "][" + std::to_string(i) + "]", *L.block(k, i)});
  const auto stacked = L.stacked();
  const Vector y_all = stack(ys);
  out.smooth.push_back({"g", SmoothFunction::least_squares(stacked, y_all)});
  const auto product = ConvexSet::product(sets);
  out.primal_objective = [product, stacked, y_all](const Vector& x) {
    return set_penalty(product, x) + half_sq(stacked.apply(x) - y_all);
  };
  out.solve = [sets, L, ys, x0](const SolverConfig& cfg) {
    auto res = multichannel_recovery(sets, L, ys, cfg, x0);
    RunOutcome r{std::move(res.report), {}, {}, {}};
    r.point = r.primal = r.report.final_point;
    for (std::size_t i = 0; i < res.blocks.size(); ++i)
      r.extras.emplace_back("x[" + std::to_string(i) + "]", res.blocks[i]);
    return r;
  };
  return out;
}

}  // namespace

PreparedProblem prepare(const ProblemFile& problem) {
  const Field p(problem.payload, "payload");
  switch (problem.kind) {
    case ProblemKind::kLasso: return prepare_lasso(problem, p, false);
    case ProblemKind::kElasticNet: return prepare_lasso(problem, p, true);
    case ProblemKind::kConstrainedLs: return prepare_constrained_ls(problem, p);
    case ProblemKind::kEnvelope: return prepare_envelope(problem, p);
    case ProblemKind::kMinkowskiProjection: return prepare_minkowski(problem, p);
    case ProblemKind::kImageProjection: return prepare_image(problem, p);
    case ProblemKind::kAlternating: return prepare_alternating(problem, p);
    case ProblemKind::kBarycentric: return prepare_barycentric(problem, p);
    case ProblemKind::kBivariate: return prepare_bivariate(problem, p);
    case ProblemKind::kBestApproximation: return prepare_best_approximation(problem, p);
    case ProblemKind::kSupportRegularized: return prepare_support_regularized(problem, p);
    case ProblemKind::kMultichannel: return prepare_multichannel(problem, p);
    case ProblemKind::kCustomFg: return prepare_custom(problem, p);
  }
  throw ParseError("kind", "unhandled kind");
}

StepSchedule resolve_schedule(const PreparedProblem& prepared, const SolverSpec& solver) {
  switch (prepared.step_policy) {
    case StepPolicy::kPrescribed:
      if (solver.step)
        fail(ErrorKind::kConfig, "kind " + std::string(to_string(prepared.kind)) + " prescribes its step (" +
                                     prepared.prescribed_rule + "); set step to \"auto\"");
      return *prepared.prescribed;
    case StepPolicy::kInverseBeta:
      if (solver.step)
        fail(ErrorKind::kConfig, "fista uses the fixed step 1/beta; set step to \"auto\"");
      return StepSchedule::standard(prepared.beta);
    case StepPolicy::kUser:
      break;
  }
  const double beta = prepared.beta;
  if (!solver.step) {
    if (solver.epsilon) return StepSchedule::constant(beta, 1.0 / beta, *solver.epsilon);
    return StepSchedule::standard(beta);
  }
  const double gamma = *solver.step;
  double epsilon = 0.1 / beta;
  if (solver.epsilon) {
    epsilon = *solver.epsilon;
  } else {
    const double fitted = std::min({0.1 / beta, gamma, 2.0 / beta - gamma});
    if (fitted > 0.0) epsilon = fitted;
  }
  return StepSchedule::constant(beta, gamma, epsilon);
}

}  // namespace proxkit::cli
