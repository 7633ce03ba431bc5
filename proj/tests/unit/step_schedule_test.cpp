#include "proxkit/step_schedule.hpp"

#include "proxkit/errors.hpp"

#include <gtest/gtest.h>

#include <random>

namespace proxkit {
namespace {

TEST(StepScheduleTest, Standard) {
  const auto s = StepSchedule::standard(4.0);
  EXPECT_EQ(s.step(0), 0.25);
  EXPECT_EQ(s.step(1000), 0.25);
  EXPECT_DOUBLE_EQ(s.lower(), 0.025);
  EXPECT_DOUBLE_EQ(s.upper(), 0.475);
}

TEST(StepScheduleTest, CyclicAndHarmonic) {
  const StepSchedule cyc(1.0, 0.1, StepSchedule::Cyclic{{0.5, 1.5}});
  EXPECT_EQ(cyc.step(0), 0.5);
  EXPECT_EQ(cyc.step(1), 1.5);
  EXPECT_EQ(cyc.step(2), 0.5);
  const StepSchedule harm(1.0, 0.1, StepSchedule::HarmonicCapped{});
  EXPECT_DOUBLE_EQ(harm.step(0), 1.9);
  EXPECT_DOUBLE_EQ(harm.step(1), 1.5);
  EXPECT_DOUBLE_EQ(harm.step(3), 1.25);
}

TEST(StepScheduleTest, RejectsOutOfInterval) {
  for (double gamma : {0.0, 0.01, 0.48, 0.5, 1.0}) {
    try {
      StepSchedule::constant(4.0, gamma, 0.025);
      FAIL() << "gamma " << gamma << " accepted";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kConfig);
      EXPECT_NE(std::string(e.what()).find("[0.025, 0.475]"), std::string::npos) << e.what();
    }
  }
  EXPECT_THROW(StepSchedule::standard(0.0), Error);
  EXPECT_THROW(StepSchedule::constant(1.0, 1.0, 1.0), Error);
  EXPECT_THROW(StepSchedule::constant(1.0, 1.0, 0.0), Error);
  EXPECT_THROW(StepSchedule(1.0, 0.1, StepSchedule::Cyclic{{}}), Error);
  EXPECT_THROW(StepSchedule(1.0, 0.1, StepSchedule::Cyclic{{1.0, 2.0}}), Error);
}

TEST(StepScheduleProperty, StepsStayInInterval) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double beta = 0.01 + 100.0 * unit(rng);
    const double eps = (0.01 + 0.98 * unit(rng)) / beta;
    std::vector<double> gammas;
    for (int k = 0; k < 3; ++k) gammas.push_back(eps + unit(rng) * (2.0 / beta - 2.0 * eps));
    for (const auto& rule : {StepSchedule::Rule{StepSchedule::HarmonicCapped{}},
                             StepSchedule::Rule{StepSchedule::Cyclic{gammas}},
                             StepSchedule::Rule{StepSchedule::Constant{gammas[0]}}}) {
      const StepSchedule s(beta, eps, rule);
      for (std::size_t n = 0; n < 50; ++n) {
        EXPECT_GE(s.step(n), s.lower());
        EXPECT_LE(s.step(n), s.upper());
      }
    }
  }
}

}  // namespace
}  // namespace proxkit
