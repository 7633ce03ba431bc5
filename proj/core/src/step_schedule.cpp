#include "proxkit/step_schedule.hpp"

#include "proxkit/detail/overloaded.hpp"
#include "proxkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace proxkit {

using detail::overloaded;

StepSchedule::StepSchedule(double beta, double epsilon, Rule rule)
    : beta_(beta), epsilon_(epsilon), rule_(std::move(rule)) {
  if (!(beta_ > 0.0) || !std::isfinite(beta_)) fail(ErrorKind::kConfig, "step schedule needs beta > 0");
  if (!(epsilon_ > 0.0) || !(epsilon_ < 1.0 / beta_)) {
    std::ostringstream os;
    os << "epsilon = " << epsilon_ << " must lie in ]0, 1/beta[ = ]0, " << 1.0 / beta_ << "[";
    fail(ErrorKind::kConfig, os.str());
  }
  std::visit(overloaded{
                 [&](const Constant& c) { check_gamma(c.gamma); },
                 [&](const Cyclic& c) {
                   if (c.gammas.empty()) fail(ErrorKind::kConfig, "cyclic schedule needs steps");
                   for (double g : c.gammas) check_gamma(g);
                 },
                 [&](const HarmonicCapped&) {},
             },
             rule_);
}

StepSchedule StepSchedule::standard(double beta) {
  return StepSchedule(beta, 0.1 / beta, Constant{1.0 / beta});
}

StepSchedule StepSchedule::constant(double beta, double gamma, double epsilon) {
  return StepSchedule(beta, epsilon, Constant{gamma});
}

void StepSchedule::check_gamma(double gamma) const {
  if (!(gamma >= lower()) || !(gamma <= upper())) {
    std::ostringstream os;
    os.precision(12);
    os << "step " << gamma << " outside admissible interval " << interval_text();
    fail(ErrorKind::kConfig, os.str());
  }
}

double StepSchedule::step(std::size_t n) const {
  return std::visit(overloaded{
                        [](const Constant& c) { return c.gamma; },
                        [&](const Cyclic& c) { return c.gammas[n % c.gammas.size()]; },
                        [&](const HarmonicCapped&) {
                          const double raw = (1.0 + 1.0 / static_cast<double>(n + 1)) / beta_;
                          return std::clamp(raw, lower(), upper());
                        },
                    },
                    rule_);
}

std::string StepSchedule::interval_text() const {
  std::ostringstream os;
  os.precision(12);
  os << "[epsilon, 2/beta - epsilon] = [" << lower() << ", " << upper() << "] (beta = " << beta_
     << ", epsilon = " << epsilon_ << ")";
  return os.str();
}

std::string StepSchedule::describe() const {
  std::ostringstream os;
  os.precision(12);
  std::visit(overloaded{
                 [&](const Constant& c) { os << "constant gamma=" << c.gamma; },
                 [&](const Cyclic& c) {
                   os << "cyclic gammas=";
                   for (std::size_t i = 0; i < c.gammas.size(); ++i) os << (i ? "," : "") << c.gammas[i];
                 },
                 [&](const HarmonicCapped&) { os << "harmonic_capped"; },
             },
             rule_);
  os << " beta=" << beta_ << " epsilon=" << epsilon_;
  return os.str();
}

}  // namespace proxkit
