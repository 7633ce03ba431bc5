#pragma once

#include "proxkit/solver.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace proxkit {

/// Convergence-rate view of an objective trace against a certified optimal
/// value mu. Gaps below the round-off floor 16 eps (1 + |mu|) read as zero.
struct RateDiagnostics {
  double mu = 0.0;
  double gap_floor = 0.0;
  std::vector<std::size_t> n;
  std::vector<double> gap;     // phi(x_n) - mu
  std::vector<double> n_gap;   // n (phi(x_n) - mu)
  std::vector<double> n2_gap;  // n^2 (phi(x_n) - mu)
  double tail_max_n_gap = 0.0;   // over the final quartile of iterations
  double tail_max_n2_gap = 0.0;

  /// Index range [tail_begin, size) covering n >= 3N/4.
  std::size_t tail_begin = 0;

  /// n * gap is nonincreasing over the final quartile.
  bool n_gap_nonincreasing_in_tail() const;
  /// First kept iterate with gap <= threshold.
  std::optional<std::size_t> first_iteration_below(double threshold) const;
  /// n^2 gap_n <= factor * n0^2 gap_{n0} for every kept n >= n0. A trace
  /// ending before n0 passes only if its final gap is zero.
  bool n2_gap_bounded_after(std::size_t n0, double factor) const;
};

/// mu_ref must come from an independent certificate (oracle or closed form).
/// Throws kReference if the trace dips below mu_ref by more than the floor.
RateDiagnostics rate_diagnostics(const SolveReport& report, double mu_ref);

}  // namespace proxkit
