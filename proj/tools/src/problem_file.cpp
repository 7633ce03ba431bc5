#include "proxkit_cli/problem_file.hpp"

#include "proxkit_cli/decode.hpp"
#include "proxkit_cli/prepared.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <utility>

namespace proxkit::cli {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<ProblemKind, std::string_view>, 13> kKinds{{
    {ProblemKind::kLasso, "lasso"},
    {ProblemKind::kElasticNet, "elastic_net"},
    {ProblemKind::kConstrainedLs, "constrained_ls"},
    {ProblemKind::kEnvelope, "envelope"},
    {ProblemKind::kMinkowskiProjection, "minkowski_projection"},
    {ProblemKind::kImageProjection, "image_projection"},
    {ProblemKind::kAlternating, "alternating"},
    {ProblemKind::kBarycentric, "barycentric"},
    {ProblemKind::kBivariate, "bivariate"},
    {ProblemKind::kBestApproximation, "best_approximation"},
    {ProblemKind::kSupportRegularized, "support_regularized"},
    {ProblemKind::kMultichannel, "multichannel"},
    {ProblemKind::kCustomFg, "custom_fg"},
}};

constexpr std::array<std::pair<Algorithm, std::string_view>, 5> kAlgorithms{{
    {Algorithm::kFb, "fb"},
    {Algorithm::kProjected, "projected"},
    {Algorithm::kFista, "fista"},
    {Algorithm::kDual, "dual"},
    {Algorithm::kBlock, "block"},
}};

SolverSpec parse_solver(const Field& field, ProblemKind kind) {
  SolverSpec spec;
  spec.algorithm = default_algorithm(kind);
  if (auto a = field.find("algorithm")) {
    const std::string name = a->string();
    bool found = false;
    for (const auto& [alg, n] : kAlgorithms)
      if (n == name) {
        spec.algorithm = alg;
        found = true;
      }
    if (!found) a->error("unknown algorithm '" + name + "' (expected fb, projected, fista, dual or block)");
  }
  if (auto f = field.find("max_iter")) spec.max_iter = static_cast<std::size_t>(f->integer(1));
  if (auto f = field.find("tol")) spec.tol = f->positive();
  if (auto f = field.find("trace_every")) spec.trace_every = static_cast<std::size_t>(f->integer(1));
  if (auto f = field.find("epsilon")) spec.epsilon = f->positive();
  if (auto f = field.find("step")) {
    if (f->raw().is_string()) {
      if (f->string() != "auto") f->error("expected a number or \"auto\"");
    } else {
      spec.step = f->number();
    }
  }
  return spec;
}

}  // namespace

std::string_view to_string(ProblemKind kind) {
  for (const auto& [k, name] : kKinds)
    if (k == kind) return name;
  return "unknown";
}

std::string_view to_string(Algorithm algorithm) {
  for (const auto& [a, name] : kAlgorithms)
    if (a == algorithm) return name;
  return "unknown";
}

std::string kind_names() {
  std::string out;
  for (const auto& [k, name] : kKinds) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

Algorithm default_algorithm(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kConstrainedLs:
    case ProblemKind::kMinkowskiProjection:
    case ProblemKind::kImageProjection:
      return Algorithm::kProjected;
    case ProblemKind::kBestApproximation:
    case ProblemKind::kSupportRegularized:
      return Algorithm::kDual;
    case ProblemKind::kMultichannel:
      return Algorithm::kBlock;
    default:
      return Algorithm::kFb;
  }
}

ProblemFile parse_problem(const json& doc) {
  const Field root(doc, "");
  if (!doc.is_object()) root.error("problem file must be a JSON object");

  ProblemFile out;
  const Field version = root["schema_version"];
  out.schema_version = static_cast<int>(version.integer(0));
  if (out.schema_version != kSchemaVersion)
    version.error("unsupported schema version " + std::to_string(out.schema_version) +
                  " (this build reads version " + std::to_string(kSchemaVersion) + ")");

  const Field kind = root["kind"];
  const std::string kind_name = kind.string();
  bool found = false;
  for (const auto& [k, name] : kKinds)
    if (name == kind_name) {
      out.kind = k;
      found = true;
    }
  if (!found) kind.error("unknown kind '" + kind_name + "' (expected one of: " + kind_names() + ")");

  const Field payload = root["payload"];
  if (!payload.raw().is_object()) payload.error("expected an object");
  out.payload = payload.raw();

  if (auto solver = root.find("solver")) {
    if (!solver->raw().is_object()) solver->error("expected an object");
    out.solver = parse_solver(*solver, out.kind);
  } else {
    out.solver.algorithm = default_algorithm(out.kind);
  }
  if (auto mu = root.find("mu")) out.mu = mu->number();

  // Decoding every descriptor is the validation step.
  (void)prepare(out);
  return out;
}

ProblemFile parse_problem_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_problem(doc);
}

ProblemFile parse_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("", "cannot open problem file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_problem_text(buffer.str());
}

json to_json(const ProblemFile& problem) {
  json solver = {
      {"algorithm", std::string(to_string(problem.solver.algorithm))},
      {"max_iter", problem.solver.max_iter},
      {"tol", problem.solver.tol},
      {"trace_every", problem.solver.trace_every},
  };
  if (problem.solver.step)
    solver["step"] = *problem.solver.step;
  else
    solver["step"] = "auto";
  if (problem.solver.epsilon) solver["epsilon"] = *problem.solver.epsilon;

  json out = {
      {"schema_version", problem.schema_version},
      {"kind", std::string(to_string(problem.kind))},
      {"payload", problem.payload},
      {"solver", solver},
  };
  if (problem.mu) out["mu"] = *problem.mu;
  return out;
}

std::string serialize(const ProblemFile& problem) { return to_json(problem).dump(2) + "\n"; }

}  // namespace proxkit::cli
