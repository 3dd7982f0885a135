// Copyright 2026 The ce-dynamics Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "cedyn/omwu.hpp"
#include "test_util.hpp"

namespace cedyn {
namespace {

TEST(Omwu, FirstIterateIsExactlyUniform) {
  Omwu o(7, 0.3);
  const SimplexVector x = o.next_strategy();
  for (double v : x) EXPECT_EQ(v, 1.0 / 7.0);
}

TEST(Omwu, HandComputedTwoSteps) {
  Omwu o(2, 0.5);
  o.observe_loss(std::vector<double>{1.0, 0.0});
  // Exponents -0.5 * (G + last) = (-1, 0).
  SimplexVector x = o.next_strategy();
  const double e = std::exp(-1.0);
  EXPECT_NEAR(x[0], e / (1 + e), 1e-15);
  EXPECT_NEAR(x[1], 1 / (1 + e), 1e-15);
  o.observe_loss(std::vector<double>{0.0, 1.0});
  // G = (1, 1), last = (0, 1): exponents (-0.5, -1).
  x = o.next_strategy();
  const double a = std::exp(-0.5), b = std::exp(-1.0);
  EXPECT_NEAR(x[0], a / (a + b), 1e-15);
  EXPECT_NEAR(x[1], b / (a + b), 1e-15);
}

// Recursive form: x_{t+1} ∝ x_t * exp(-eta (2 l_t - l_{t-1})), l_0 = 0.
TEST(Omwu, MatchesRecursiveForm) {
  SplitMix64 rng(3);
  const std::size_t n = 6;
  const double eta = 0.2;
  Omwu o(n, eta);
  Vector x(n, 1.0 / n), prev(n, 0.0);
  for (int t = 0; t < 300; ++t) {
    const Vector ell = testing::random_vector(rng, n, 0.0, 1.0);
    o.observe_loss(ell);
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      x[j] *= std::exp(-eta * (2 * ell[j] - prev[j]));
      s += x[j];
    }
    for (double& v : x) v /= s;
    prev = ell;
    const SimplexVector y = o.next_strategy();
    for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(y[j], x[j], 1e-12);
  }
}

TEST(Omwu, NoPredictionIsHedge) {
  Omwu o(3, 0.1, Prediction::none);
  o.observe_loss(std::vector<double>{0.2, 0.5, 0.9});
  o.observe_loss(std::vector<double>{0.4, 0.1, 0.0});
  const SimplexVector x = o.next_strategy();
  const double w0 = std::exp(-0.1 * 0.6), w1 = std::exp(-0.1 * 0.6),
               w2 = std::exp(-0.1 * 0.9);
  const double s = w0 + w1 + w2;
  EXPECT_NEAR(x[0], w0 / s, 1e-15);
  EXPECT_NEAR(x[1], w1 / s, 1e-15);
  EXPECT_NEAR(x[2], w2 / s, 1e-15);
}

TEST(Omwu, LargeLossesStayFiniteAndPositive) {
  Omwu o(3, 1.0);
  for (int t = 0; t < 50; ++t) o.observe_loss(std::vector<double>{100.0, 100.5, 101.0});
  const SimplexVector x = o.next_strategy();
  EXPECT_TRUE(is_simplex(x));
  for (double v : x) {
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GT(v, 0.0);
  }
}

TEST(Omwu, Errors) {
  EXPECT_THROW(Omwu(3, 0.0), ValidationError);
  EXPECT_THROW(Omwu(3, -1.0), ValidationError);
  EXPECT_THROW(Omwu(3, std::numeric_limits<double>::infinity()), ValidationError);
  EXPECT_THROW(Omwu(0, 0.1), ValidationError);
  Omwu o(3, 0.1);
  EXPECT_THROW(o.observe_loss(std::vector<double>{0.1, 0.2}), ValidationError);
  EXPECT_THROW(o.observe_loss(std::vector<double>{0.1, NAN, 0.2}), ValidationError);
  EXPECT_EQ(o.step(), 0u);
}

}  // namespace
}  // namespace cedyn
