#pragma once

#include "proxkit/solver.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace proxkit::cli {

/// Stable exit-code contract of the `proxkit` executable.
enum ExitCode : int {
  kExitConverged = 0,
  kExitIoOrParse = 1,
  kExitMaxIter = 2,
  kExitInvalidConfig = 3,
  kExitCheckFailed = 4,
};

struct RunOptions {
  std::filesystem::path problem;
  std::optional<std::size_t> max_iter;
  std::optional<double> tol;
  std::optional<std::string> step;  // "auto" or a number
  std::optional<std::filesystem::path> trace;
};

struct CheckOptions {
  std::filesystem::path problem;
  bool corrupt_prox = false;  // fault injection: shifts every checked prox output
};

int run_command(const RunOptions& options, std::ostream& out, std::ostream& err);
int check_command(const CheckOptions& options, std::ostream& out, std::ostream& err);
int norms_command(const std::filesystem::path& problem, std::ostream& out, std::ostream& err);

inline constexpr const char* kTraceHeader = "n,objective,gap_if_mu_known,step,displacement,grad_residual";

/// Writes `#`-prefixed comment lines, the header, then one row per kept
/// iterate at full precision. The gap column is empty when mu is unknown.
void write_trace_csv(std::ostream& os, const SolveReport& report, std::optional<double> mu,
                     const std::vector<std::string>& comments);

}  // namespace proxkit::cli
