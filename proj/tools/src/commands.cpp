#include "proxkit_cli/commands.hpp"

#include "proxkit_cli/prepared.hpp"
#include "proxkit_cli/problem_file.hpp"

#include "proxkit/errors.hpp"
#include "proxkit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace proxkit::cli {

namespace {

std::string number(double v, int precision = 12) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

std::string full(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::optional<ProblemFile> load(const std::filesystem::path& path, std::ostream& err) {
  try {
    return parse_problem_file(path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return std::nullopt;
  }
}

bool is_config_error(ErrorKind kind) {
  return kind == ErrorKind::kConfig || kind == ErrorKind::kDomain || kind == ErrorKind::kZeroOperator;
}

std::string step_text(const PreparedProblem& prepared, const SolverSpec& spec, const StepSchedule& s) {
  std::ostringstream os;
  os << std::setprecision(12);
  if (prepared.step_policy == StepPolicy::kPrescribed)
    os << "prescribed (" << prepared.prescribed_rule << ")";
  else if (prepared.step_policy == StepPolicy::kInverseBeta)
    os << "fixed 1/beta";
  else if (spec.step)
    os << *spec.step;
  else
    os << "auto";
  os << " -> gamma = " << s.step(0) << " (beta = " << s.beta() << ", epsilon = " << s.epsilon()
     << ", admissible [" << s.lower() << ", " << s.upper() << "])";
  return os.str();
}

}  // namespace

void write_trace_csv(std::ostream& os, const SolveReport& report, std::optional<double> mu,
                     const std::vector<std::string>& comments) {
  for (const auto& c : comments) os << "# " << c << "\n";
  os << kTraceHeader << "\n";
  for (const auto& e : report.trace) {
    os << e.n << ',' << full(e.objective) << ',';
    if (mu) os << full(e.objective - *mu);
    os << ',' << full(e.step) << ',' << full(e.displacement) << ',' << full(e.grad_residual) << "\n";
  }
}

int run_command(const RunOptions& options, std::ostream& out, std::ostream& err) {
  auto problem = load(options.problem, err);
  if (!problem) return kExitIoOrParse;

  SolverSpec spec = problem->solver;
  if (options.max_iter) spec.max_iter = *options.max_iter;
  if (options.tol) spec.tol = *options.tol;
  if (options.step) {
    if (*options.step == "auto") {
      spec.step.reset();
    } else {
      try {
        std::size_t used = 0;
        spec.step = std::stod(*options.step, &used);
        if (used != options.step->size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        err << "error: --step expects a number or \"auto\", got '" << *options.step << "'\n";
        return kExitIoOrParse;
      }
    }
  }

  const PreparedProblem prepared = prepare(*problem);
  std::optional<StepSchedule> schedule;
  try {
    schedule = resolve_schedule(prepared, spec);
  } catch (const Error& e) {
    err << "error: invalid configuration: " << e.what() << "\n";
    return kExitInvalidConfig;
  }
  const IterationLimits limits{spec.max_iter, spec.tol, spec.trace_every};

  RunOutcome outcome;
  try {
    limits.validate();
    outcome = prepared.solve(SolverConfig{*schedule, limits});
  } catch (const Error& e) {
    err << "error: " << (is_config_error(e.kind()) ? "invalid configuration: " : "") << e.what() << "\n";
    return is_config_error(e.kind()) ? kExitInvalidConfig : kExitIoOrParse;
  }
  const auto& report = outcome.report;
  const std::string termination(to_string(report.termination));

  if (options.trace) {
    std::ofstream trace(*options.trace);
    if (!trace) {
      err << "error: cannot write trace file " << options.trace->string() << "\n";
      return kExitIoOrParse;
    }
    std::vector<std::string> comments = {
        "proxkit run " + options.problem.filename().string(),
        "kind: " + std::string(to_string(problem->kind)),
        "algorithm: " + std::string(to_string(spec.algorithm)),
        "step: " + step_text(prepared, spec, *schedule),
        "schedule: " + schedule->describe(),
        "max_iter: " + std::to_string(spec.max_iter) + ", tol: " + number(spec.tol) +
            ", trace_every: " + std::to_string(spec.trace_every),
        "objective: " + prepared.trace_objective,
        problem->mu ? "mu: " + full(*problem->mu) + " (gap = objective - mu)" : "mu: unknown (gap column empty)",
        "termination: " + termination + " after " + std::to_string(report.iterations) + " iterations",
    };
    write_trace_csv(trace, report, problem->mu, comments);
    if (!trace) {
      err << "error: failed writing trace file " << options.trace->string() << "\n";
      return kExitIoOrParse;
    }
  }

  out << "kind: " << to_string(problem->kind) << "\n";
  out << "algorithm: " << to_string(spec.algorithm) << "\n";
  out << "step: " << step_text(prepared, spec, *schedule) << "\n";
  out << "termination: " << termination << "\n";
  out << "iterations: " << report.iterations << "\n";
  if (!report.trace.empty()) out << "objective: " << number(report.trace.back().objective) << "\n";
  out << "x: " << format_vector(outcome.point, 12) << "\n";
  for (const auto& [name, v] : outcome.extras) out << name << ": " << format_vector(v, 12) << "\n";
  return report.termination == Termination::kTolReached ? kExitConverged : kExitMaxIter;
}

namespace {

enum class Status { kPass, kFail, kSkip };

struct CheckRow {
  std::string name;
  Status status;
  std::string detail;
};

std::string_view status_text(Status s) {
  switch (s) {
    case Status::kPass: return "PASS";
    case Status::kFail: return "FAIL";
    case Status::kSkip: return "SKIP";
  }
  return "?";
}

// Runs one check; capability and sampling limits are reported as skips,
// anything else as a failure, and later checks still run.
template <class Body>
CheckRow guarded_check(std::string name, Body&& body) {
  try {
    return body(std::move(name));
  } catch (const Error& e) {
    const bool skip = e.kind() == ErrorKind::kCapability || e.kind() == ErrorKind::kSampling;
    return {std::move(name), skip ? Status::kSkip : Status::kFail, e.what()};
  } catch (const std::exception& e) {
    return {std::move(name), Status::kFail, e.what()};
  }
}

constexpr int kCheckPoints = 3;
constexpr int kCheckSamples = 100;
constexpr int kGradientPoints = 5;

std::vector<Vector> check_points(const Vector& center, std::uint64_t seed) {
  oracle::DomainSampler sampler(seed);
  std::vector<Vector> points;
  for (int i = 0; i < kCheckPoints; ++i) points.push_back(sampler.in_box(center, 3.0));
  return points;
}

int grid_resolution(Index dim) {
  switch (dim) {
    case 1: return 2001;
    case 2: return 401;
    default: return 61;
  }
}

}  // namespace

int check_command(const CheckOptions& options, std::ostream& out, std::ostream& err) {
  auto problem = load(options.problem, err);
  if (!problem) return kExitIoOrParse;
  const PreparedProblem prepared = prepare(*problem);
  const std::uint64_t seed = oracle::default_seed();

  std::vector<CheckRow> rows;
  std::optional<StepSchedule> schedule;
  try {
    schedule = resolve_schedule(prepared, problem->solver);
    rows.push_back({"step schedule", Status::kPass, schedule->describe()});
  } catch (const Error& e) {
    rows.push_back({"step schedule", Status::kFail, e.what()});
    schedule = StepSchedule::standard(prepared.beta);
  }
  const double gamma = schedule->step(0);

  for (const auto& [name, f] : prepared.functions) {
    rows.push_back(guarded_check("prox inequality " + name + " (" + std::string(f.kind_name()) + ")",
                                 [&, &f = f](std::string row) {
      double worst = -std::numeric_limits<double>::infinity();
      bool pass = true;
      for (const auto& x : check_points(f.feasible_point(), seed)) {
        Vector p = f.prox(gamma, x);
        if (options.corrupt_prox) p[0] += 0.1;
        const auto r = oracle::verify_prox_inequality(f, gamma, x, p, kCheckSamples, seed);
        pass = pass && r.pass;
        worst = std::max(worst, r.worst_margin);
      }
      return CheckRow{std::move(row), pass ? Status::kPass : Status::kFail,
                      "gamma " + number(gamma, 6) + ", worst margin " + number(worst, 3) + " (seed " +
                          std::to_string(seed) + ")"};
    }));
  }

  for (const auto& [name, C] : prepared.sets) {
    rows.push_back(guarded_check("projection inequality " + name + " (" + std::string(C.kind_name()) + ")",
                                 [&, &C = C](std::string row) {
      double worst = -std::numeric_limits<double>::infinity();
      bool pass = true;
      for (const auto& x : check_points(C.witness(), seed)) {
        const auto r = oracle::verify_projection_inequality(C, x, C.project(x), kCheckSamples, seed);
        pass = pass && r.pass;
        worst = std::max(worst, r.worst_margin);
      }
      return CheckRow{std::move(row), pass ? Status::kPass : Status::kFail,
                      "worst margin " + number(worst, 3) + " (seed " + std::to_string(seed) + ")"};
    }));
  }

  for (const auto& [name, g] : prepared.smooth) {
    rows.push_back(guarded_check("gradient vs finite differences " + name, [&, &g = g](std::string row) {
      oracle::DomainSampler sampler(seed);
      double worst = 0.0;
      for (int i = 0; i < kGradientPoints; ++i) {
        const Vector x = sampler.in_box(Vector::Zero(g.dim()), 3.0);
        const Vector exact = g.grad(x);
        const Vector fd = oracle::finite_diff_grad(g, x, 1e-6 * (1.0 + x.norm()));
        worst = std::max(worst, (fd - exact).norm() / (1.0 + exact.norm()));
      }
      return CheckRow{std::move(row), worst <= 1e-5 ? Status::kPass : Status::kFail,
                      "max relative error " + number(worst, 3)};
    }));
  }

  rows.push_back(guarded_check("monotone objective (short run)", [&](std::string row) {
    if (!prepared.monotone)
      return CheckRow{std::move(row), Status::kSkip, "inertial scheme: monotonicity is not guaranteed"};
    const IterationLimits limits{std::min<std::size_t>(problem->solver.max_iter, 50), problem->solver.tol, 1};
    const auto outcome = prepared.solve(SolverConfig{*schedule, limits});
    const bool ok = outcome.report.objective_nonincreasing(1e-10);
    return CheckRow{std::move(row), ok ? Status::kPass : Status::kFail,
                    std::to_string(outcome.report.iterations) + " iterations audited (" +
                        prepared.trace_objective + ")"};
  }));

  rows.push_back(guarded_check("grid oracle", [&](std::string row) {
    if (prepared.dim > oracle::kMaxGridDim)
      return CheckRow{std::move(row), Status::kSkip,
                      "dimension " + std::to_string(prepared.dim) + " > " + std::to_string(oracle::kMaxGridDim)};
    const IterationLimits limits{problem->solver.max_iter, problem->solver.tol, problem->solver.trace_every};
    const auto outcome = prepared.solve(SolverConfig{*schedule, limits});
    const Vector& x = outcome.primal;
    const double solver_value = prepared.primal_objective(x);
    const double half_width = std::max(1.0, x.cwiseAbs().maxCoeff());
    const Vector w = Vector::Constant(x.size(), half_width);
    oracle::GridResult grid;
    try {
      grid = oracle::grid_minimize(prepared.primal_objective, x - w, x + w, grid_resolution(prepared.dim));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kDomain)
        return CheckRow{std::move(row), Status::kSkip, "objective is +inf on the whole grid"};
      throw;
    }
    const bool ok = solver_value <= grid.value + 1e-6 * (1.0 + std::abs(grid.value));
    return CheckRow{std::move(row), ok ? Status::kPass : Status::kFail,
                    "solver " + number(solver_value) + " vs grid " + number(grid.value) + " (spacing " +
                        number(grid.spacing, 3) + ")"};
  }));

  std::size_t width = 5;
  for (const auto& r : rows) width = std::max(width, r.name.size());
  out << std::left << std::setw(static_cast<int>(width)) << "check" << "  status  detail\n";
  bool failed = false;
  for (const auto& r : rows) {
    out << std::left << std::setw(static_cast<int>(width)) << r.name << "  " << status_text(r.status)
        << "    " << r.detail << "\n";
    failed = failed || r.status == Status::kFail;
  }
  out << (failed ? "result: FAIL" : "result: PASS") << "\n";
  return failed ? kExitCheckFailed : kExitConverged;
}

int norms_command(const std::filesystem::path& path, std::ostream& out, std::ostream& err) {
  auto problem = load(path, err);
  if (!problem) return kExitIoOrParse;
  const PreparedProblem prepared = prepare(*problem);
  for (const auto& [name, L] : prepared.operators) {
    try {
      const auto est = L.estimate_norm();
      out << "||" << name << "|| = " << number(est.value) << "  ("
          << (est.exact ? std::string("exact") :
                          "power iteration, " + std::to_string(est.iterations) + " iterations, " +
                              (est.converged ? "converged" : "not converged, inflated by 1%"))
          << ")\n";
    } catch (const Error& e) {
      out << "||" << name << "|| : " << e.what() << "\n";
    }
  }
  out << "beta = " << number(prepared.beta) << "\n";
  return kExitConverged;
}

}  // namespace proxkit::cli
