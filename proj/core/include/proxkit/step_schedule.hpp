#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace proxkit {

/// Step sizes gamma_n confined to [epsilon, 2/beta - epsilon] with
/// 0 < epsilon < 1/beta. Construction rejects any rule that could leave the
/// interval, so a valid schedule is a proof obligation discharged up front.
class StepSchedule {
 public:
  struct Constant { double gamma; };
  struct Cyclic { std::vector<double> gammas; };
  /// gamma_n = clamp((1 + 1/(n+1)) / beta, epsilon, 2/beta - epsilon)
  struct HarmonicCapped {};
  using Rule = std::variant<Constant, Cyclic, HarmonicCapped>;

  StepSchedule(double beta, double epsilon, Rule rule);

  /// gamma = 1/beta, epsilon = 0.1/beta.
  static StepSchedule standard(double beta);
  static StepSchedule constant(double beta, double gamma, double epsilon);
  static StepSchedule constant(double beta, double gamma) { return constant(beta, gamma, 0.1 / beta); }

  double step(std::size_t n) const;
  double beta() const { return beta_; }
  double epsilon() const { return epsilon_; }
  double lower() const { return epsilon_; }
  double upper() const { return 2.0 / beta_ - epsilon_; }
  const Rule& rule() const { return rule_; }

  std::string describe() const;
  std::string interval_text() const;

 private:
  void check_gamma(double gamma) const;

  double beta_;
  double epsilon_;
  Rule rule_;
};

}  // namespace proxkit
