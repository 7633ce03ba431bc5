#pragma once

#include "generators.hpp"

#include <gtest/gtest.h>

#include <string>

namespace proxkit::testing {

inline ::testing::AssertionResult vectors_near(const Vector& a, const Vector& b, double tol) {
  if (a.size() != b.size())
    return ::testing::AssertionFailure() << "size " << a.size() << " vs " << b.size();
  const double d = (a - b).lpNorm<Eigen::Infinity>();
  if (d <= tol) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << format_vector(a, 15) << " vs " << format_vector(b, 15)
                                       << " differ by " << d << " > " << tol;
}

#define EXPECT_VEC_NEAR(a, b, tol) EXPECT_TRUE(::proxkit::testing::vectors_near((a), (b), (tol)))
#define ASSERT_VEC_NEAR(a, b, tol) ASSERT_TRUE(::proxkit::testing::vectors_near((a), (b), (tol)))

}  // namespace proxkit::testing
