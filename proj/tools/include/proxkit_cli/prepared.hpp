#pragma once

#include "proxkit_cli/problem_file.hpp"

#include "proxkit/convex_set.hpp"
#include "proxkit/linear_operator.hpp"
#include "proxkit/prox_function.hpp"
#include "proxkit/smooth_function.hpp"
#include "proxkit/solver.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace proxkit::cli {

struct RunOutcome {
  SolveReport report;
  Vector point;   // the answer printed to the user
  Vector primal;  // point in the variable of primal_objective (stacked for block problems)
  std::vector<std::pair<std::string, Vector>> extras;
};

template <class T>
struct Named {
  std::string name;
  T value;
};

/// How the step of a problem kind is chosen.
enum class StepPolicy {
  kUser,        // "auto" or any admissible constant
  kInverseBeta, // fixed at 1/beta (inertial scheme)
  kPrescribed,  // fixed by the method itself (e.g. gamma = rho)
};

/// A decoded problem ready to run: the schedule constant, a solve closure,
/// the primal objective and the named building blocks that `check` audits.
struct PreparedProblem {
  ProblemKind kind = ProblemKind::kLasso;
  Algorithm algorithm = Algorithm::kFb;
  double beta = 0.0;  // constant the schedule is validated against
  StepPolicy step_policy = StepPolicy::kUser;
  std::optional<StepSchedule> prescribed;  // for kPrescribed
  std::string prescribed_rule;             // e.g. "gamma = rho"
  std::string trace_objective;             // what the objective column holds
  bool monotone = true;                    // objective trace is nonincreasing in theory

  Index dim = 0;  // primal dimension
  std::function<RunOutcome(const SolverConfig&)> solve;
  std::function<double(const Vector&)> primal_objective;  // +inf off the domain

  std::vector<Named<ProxFunction>> functions;
  std::vector<Named<ConvexSet>> sets;
  std::vector<Named<SmoothFunction>> smooth;
  std::vector<Named<LinearOperator>> operators;
};

/// Decodes the payload for the file's kind; ParseError names the field path.
PreparedProblem prepare(const ProblemFile& problem);

/// Resolves solver.step into a schedule:
///   auto    -> gamma = 1/beta, epsilon = 0.1/beta
///   numeric -> gamma, epsilon = solver.epsilon or min(0.1/beta, gamma, 2/beta - gamma)
/// Throws kConfig (citing the admissible interval) when the step is
/// inadmissible or not allowed for the algorithm.
StepSchedule resolve_schedule(const PreparedProblem& prepared, const SolverSpec& solver);

}  // namespace proxkit::cli
