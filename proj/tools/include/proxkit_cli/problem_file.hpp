#pragma once

#include "json.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace proxkit::cli {

inline constexpr int kSchemaVersion = 1;

enum class ProblemKind {
  kLasso,
  kElasticNet,
  kConstrainedLs,
  kEnvelope,
  kMinkowskiProjection,
  kImageProjection,
  kAlternating,
  kBarycentric,
  kBivariate,
  kBestApproximation,
  kSupportRegularized,
  kMultichannel,
  kCustomFg,
};

enum class Algorithm { kFb, kProjected, kFista, kDual, kBlock };

std::string_view to_string(ProblemKind kind);
std::string_view to_string(Algorithm algorithm);
/// Comma-separated list of every kind name, for error messages.
std::string kind_names();

struct SolverSpec {
  Algorithm algorithm = Algorithm::kFb;
  std::size_t max_iter = 1000;
  double tol = 1e-10;
  std::optional<double> step;  // nullopt means "auto"
  std::size_t trace_every = 1;
  std::optional<double> epsilon;

  bool operator==(const SolverSpec&) const = default;
};

struct ProblemFile {
  int schema_version = kSchemaVersion;
  ProblemKind kind = ProblemKind::kLasso;
  nlohmann::json payload;
  SolverSpec solver;
  std::optional<double> mu;  // certified optimal value, enables the gap column

  bool operator==(const ProblemFile&) const = default;
};

/// Thrown for malformed or inconsistent problem files; the message starts
/// with the offending field path, e.g. "payload.L.cols: ...".
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string path, const std::string& message);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Parses and fully validates (every descriptor is decoded and dimensions
/// are cross-checked). Solver defaults are filled in.
ProblemFile parse_problem(const nlohmann::json& doc);
ProblemFile parse_problem_text(std::string_view text);
ProblemFile parse_problem_file(const std::filesystem::path& path);

nlohmann::json to_json(const ProblemFile& problem);
std::string serialize(const ProblemFile& problem);

/// Algorithm used when the file does not name one.
Algorithm default_algorithm(ProblemKind kind);

}  // namespace proxkit::cli
