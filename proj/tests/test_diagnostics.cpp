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
#include <vector>

#include "cedyn/diagnostics.hpp"
#include "cedyn/game.hpp"
#include "cedyn/runner.hpp"
#include "test_util.hpp"

namespace cedyn {
namespace {

std::vector<Vector> random_sequence(std::uint64_t seed, std::size_t len, std::size_t dim) {
  SplitMix64 rng(seed);
  std::vector<Vector> seq;
  for (std::size_t t = 0; t < len; ++t) seq.push_back(testing::random_vector(rng, dim, 0.0, 1.0));
  return seq;
}

TEST(FiniteDifferences, RecursionMatchesBinomialForm) {
  const auto seq = random_sequence(12, 40, 5);
  const FiniteDiffTable table = finite_differences(seq, 10);
  EXPECT_EQ(table.max_order(), 10u);
  for (std::size_t h = 0; h <= 10; ++h) {
    EXPECT_EQ(table.length(h), 40 - h);
    for (std::size_t t = 0; t < table.length(h); ++t) {
      const Vector b = binomial_difference(seq, h, t);
      for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(table.at(h, t)[j], b[j], 1e-9);
    }
  }
}

TEST(FiniteDifferences, PolynomialSequences) {
  // z_t = t^2: D_1 = 2t + 1, D_2 = 2, D_3 = 0.
  std::vector<Vector> seq;
  for (int t = 0; t < 8; ++t) seq.push_back({static_cast<double>(t * t)});
  const FiniteDiffTable table = finite_differences(seq, 3);
  for (std::size_t t = 0; t < 7; ++t) EXPECT_DOUBLE_EQ(table.at(1, t)[0], 2.0 * t + 1);
  for (std::size_t t = 0; t < 6; ++t) EXPECT_DOUBLE_EQ(table.at(2, t)[0], 2.0);
  for (std::size_t t = 0; t < 5; ++t) EXPECT_DOUBLE_EQ(table.at(3, t)[0], 0.0);
  EXPECT_THROW(finite_differences(seq, 8), ValidationError);
}

TEST(FiniteDifferences, BinomialHelpers) {
  EXPECT_DOUBLE_EQ(binomial_coefficient(10, 3), 120.0);
  EXPECT_DOUBLE_EQ(binomial_coefficient(5, 0), 1.0);
  std::vector<double> v(1000, 0.1);
  EXPECT_NEAR(pairwise_sum(v), 100.0, 1e-12);
}

TEST(Variance, HandValueAndProperties) {
  const Vector q{0.5, 0.5};
  EXPECT_DOUBLE_EQ(variance(q, Vector{0.0, 2.0}), 1.0);
  SplitMix64 rng(31);
  for (int rep = 0; rep < 200; ++rep) {
    const Vector p = testing::random_simplex(rng, 6, 0.0);
    const Vector z = testing::random_vector(rng, 6, -3.0, 3.0);
    const double v = variance(p, z);
    EXPECT_GE(v, 0.0);
    Vector shifted = z;
    for (double& s : shifted) s += 1.7;
    EXPECT_NEAR(variance(p, shifted), v, 1e-12);
    EXPECT_LE(v, inf_norm(z) * inf_norm(z) + 1e-15);
  }
  EXPECT_THROW(variance(q, Vector{1.0, 2.0, 3.0}), ValidationError);
}

TEST(Variance, SandwichUnderMultiplicativeCloseness) {
  SplitMix64 rng(99);
  for (int rep = 0; rep < 300; ++rep) {
    const Vector q = testing::random_simplex(rng, 5);
    const double delta = 0.05 * rng.uniform();
    Vector r(5);
    double s = 0.0;
    for (std::size_t j = 0; j < 5; ++j) {
      r[j] = q[j] * (1.0 + rng.uniform(-delta, delta));
      s += r[j];
    }
    for (double& v : r) v /= s;
    const double zeta = std::max(max_ratio(q, r), max_ratio(r, q)) - 1.0;
    const Vector z = testing::random_vector(rng, 5, -1.0, 1.0);
    const double vq = variance(q, z), vr = variance(r, z);
    EXPECT_GE(vr, (1.0 - zeta) * vq - 1e-15);
    EXPECT_LE(vr, (1.0 + zeta) * vq + 1e-15);
  }
}

TEST(Smoothness, BoundValues) {
  EXPECT_DOUBLE_EQ(smoothness_bound(0, 0.125), 1.0);
  EXPECT_DOUBLE_EQ(smoothness_bound(1, 0.125), 0.125);
  EXPECT_DOUBLE_EQ(smoothness_bound(2, 0.5), 0.25 * 128.0);
  EXPECT_NEAR(smoothness_eta_limit(0.125, 2), 0.125 / (72.0 * std::exp(5.0)), 1e-18);
  EXPECT_DOUBLE_EQ(smoothness_eta_limit_loose(0.125, 2), 0.125 / 72.0);
}

TEST(Stability, LinearEnvelopeOnEtaGrid) {
  for (int k = 1; k <= 1000; ++k) {
    const double eta = (1.0 / 64.0) * k / 1000.0;
    EXPECT_LE(std::exp(6.0 * eta), 1.0 + 7.0 * eta) << eta;
  }
}

TEST(Stability, SelfPlayRunsStayClose) {
  for (Dynamics d : {Dynamics::sl_omwu, Dynamics::bm_omwu, Dynamics::arbo}) {
    RunConfig c;
    c.dynamics = d;
    c.horizon = 300;
    c.eta = 0.05;
    const RunResult r = run_dynamics(random_game(2, {3, 3}, 8), c);
    for (std::size_t i = 0; i < 2; ++i) {
      const StabilityReport s = stability_check(r.trace, i, c.eta);
      EXPECT_TRUE(s.pass_exp) << to_string(d) << " ratio " << s.max_ratio;
      EXPECT_TRUE(s.pass_linear);
      EXPECT_GT(s.max_ratio, 1.0);
      EXPECT_TRUE(r.summary.players[i].stability_pass);
    }
  }
}

TEST(Rvu, HoldsOnSelfPlay) {
  RunConfig c;
  c.horizon = 400;
  c.eta = 0.01;
  const RunResult r = run_dynamics(random_game(2, {3, 4}, 13), c);
  for (std::size_t i = 0; i < 2; ++i) {
    const RvuReport rvu = rvu_check(r.trace, i, 0.01, 64.0);
    EXPECT_TRUE(rvu.holds);
    EXPECT_GE(rvu.slack, 0.0);
    EXPECT_GT(rvu.rhs, rvu.rhs_log_actions);
  }
}

TEST(VarianceCheck, ReportArithmetic) {
  const VarianceCheckReport r = make_variance_check(10.0, 4.0, 2, 0.1);
  EXPECT_DOUBLE_EQ(r.rhs, 2.0 + 3.2);
  EXPECT_FALSE(r.holds);
  EXPECT_DOUBLE_EQ(r.min_constant, 8.0 / 32.0);
  EXPECT_TRUE(make_variance_check(10.0, 4.0, 2, r.min_constant).holds);
  EXPECT_EQ(default_difference_order(1), 1u);
  EXPECT_EQ(default_difference_order(2), 1u);
  EXPECT_EQ(default_difference_order(1024), 10u);
  EXPECT_EQ(default_difference_order(1025), 11u);
}

TEST(VarianceCheck, MatchesDirectSum) {
  RunConfig c;
  c.horizon = 100;
  c.eta = 0.1;
  const RunResult r = run_dynamics(random_game(2, {3, 3}, 3), c);
  double lhs = 0.0, sum = 0.0;
  Vector prev(6, 0.0);
  for (const auto& round : r.trace.rounds) {
    const auto& p = round[0].inner;
    const auto& z = round[0].inner_loss;
    Vector d(6);
    for (std::size_t j = 0; j < 6; ++j) d[j] = z[j] - prev[j];
    lhs += variance(p, d);
    sum += variance(p, prev);
    prev = z;
  }
  const VarianceCheckReport rep = check_variance_inequality(r.trace, 0);
  EXPECT_NEAR(rep.lhs, lhs, 1e-12);
  EXPECT_NEAR(rep.variance_sum, sum, 1e-12);
  EXPECT_TRUE(rep.holds);
  EXPECT_EQ(rep.order, 7u);
}

}  // namespace
}  // namespace cedyn
