#include "proxkit/diagnostics.hpp"

#include "proxkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace proxkit {

RateDiagnostics rate_diagnostics(const SolveReport& report, double mu_ref) {
  if (!std::isfinite(mu_ref)) fail(ErrorKind::kReference, "reference optimum must be finite");
  if (report.trace.empty()) fail(ErrorKind::kReference, "empty trace");
  RateDiagnostics d;
  d.mu = mu_ref;
  d.gap_floor = 16.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(mu_ref));

  for (const auto& e : report.trace) {
    double gap = e.objective - mu_ref;
    if (gap < -d.gap_floor) {
      std::ostringstream os;
      os.precision(17);
      os << "reference optimum " << mu_ref << " lies above observed objective " << e.objective
         << " at n = " << e.n;
      fail(ErrorKind::kReference, os.str());
    }
    if (gap <= d.gap_floor) gap = 0.0;
    const double n = static_cast<double>(e.n);
    d.n.push_back(e.n);
    d.gap.push_back(gap);
    d.n_gap.push_back(n * gap);
    d.n2_gap.push_back(n * n * gap);
  }

  const std::size_t last = d.n.back();
  const auto threshold = static_cast<std::size_t>(std::ceil(0.75 * static_cast<double>(last)));
  d.tail_begin = static_cast<std::size_t>(
      std::lower_bound(d.n.begin(), d.n.end(), threshold) - d.n.begin());
  for (std::size_t i = d.tail_begin; i < d.n.size(); ++i) {
    d.tail_max_n_gap = std::max(d.tail_max_n_gap, d.n_gap[i]);
    d.tail_max_n2_gap = std::max(d.tail_max_n2_gap, d.n2_gap[i]);
  }
  return d;
}

bool RateDiagnostics::n_gap_nonincreasing_in_tail() const {
  for (std::size_t i = tail_begin + 1; i < n_gap.size(); ++i)
    if (n_gap[i] > n_gap[i - 1]) return false;
  return true;
}

std::optional<std::size_t> RateDiagnostics::first_iteration_below(double threshold) const {
  for (std::size_t i = 0; i < gap.size(); ++i)
    if (gap[i] <= threshold) return n[i];
  return std::nullopt;
}

bool RateDiagnostics::n2_gap_bounded_after(std::size_t n0, double factor) const {
  // A run that stopped at the optimum (zero gap) before n0 has zero gap at
  // n0 and beyond, so the bound holds.
  if (!n.empty() && n.back() < n0) return gap.back() == 0.0;
  const auto it = std::find(n.begin(), n.end(), n0);
  if (it == n.end()) return false;
  const double reference = n2_gap[static_cast<std::size_t>(it - n.begin())];
  for (std::size_t i = static_cast<std::size_t>(it - n.begin()); i < n.size(); ++i)
    if (n2_gap[i] > factor * reference) return false;
  return true;
}

}  // namespace proxkit
