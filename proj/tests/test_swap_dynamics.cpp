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

#include <vector>

#include "cedyn/game.hpp"
#include "cedyn/metrics.hpp"
#include "cedyn/runner.hpp"
#include "cedyn/swap_dynamics.hpp"
#include "test_util.hpp"

namespace cedyn {
namespace {

TEST(BmOmwu, FirstRoundIsUniform) {
  BmOmwu bm(4, 0.1);
  for (double v : bm.next_strategy()) EXPECT_NEAR(v, 0.25, 1e-15);
  for (double v : bm.matrix().data()) EXPECT_EQ(v, 0.25);
}

TEST(BmOmwu, CopiesSeeScaledLosses) {
  const Game g = random_game(2, {3, 3}, 21);
  BmOmwu a(3, 0.2), b(3, 0.2);
  std::vector<Vector> expected(3, Vector(3, 0.0));
  for (int t = 0; t < 50; ++t) {
    StrategyProfile x{a.next_strategy(), b.next_strategy()};
    EXPECT_TRUE(a.matrix().strictly_positive());
    EXPECT_LE(stationary_residual(a.matrix(), x[0]), 1e-10);
    const Vector la = expected_loss(g, x, 0);
    a.observe_loss(la);
    b.observe_loss(expected_loss(g, x, 1));
    EXPECT_LE(a.last_decomposition_gap(), 1e-12);
    for (std::size_t gi = 0; gi < 3; ++gi)
      for (std::size_t k = 0; k < 3; ++k) {
        expected[gi][k] += x[0][gi] * la[k];
        EXPECT_DOUBLE_EQ(a.last_scaled_losses()[gi * 3 + k], x[0][gi] * la[k]);
      }
  }
  for (std::size_t gi = 0; gi < 3; ++gi)
    for (std::size_t k = 0; k < 3; ++k)
      EXPECT_NEAR(a.copies()[gi].cumulative_loss()[k], expected[gi][k], 1e-12);
}

TEST(BmOmwu, DecompositionGapDetectsNonStationaryPoint) {
  const TransitionMatrix q(2, {0.9, 0.1, 0.5, 0.5});
  const Vector pi = tree_theorem_stationary(q);
  const Vector ell{0.3, 0.8};
  EXPECT_LE(loss_decomposition_gap(q, pi, ell), 1e-15);
  EXPECT_GT(loss_decomposition_gap(q, Vector{0.5, 0.5}, ell), 1e-3);
}

TEST(BmOmwu, RequiresUnitIntervalLosses) {
  BmOmwu bm(3, 0.1);
  EXPECT_THROW(bm.observe_loss(std::vector<double>{0.1, 0.2, 0.3}), ValidationError);
  bm.next_strategy();
  EXPECT_THROW(bm.observe_loss(std::vector<double>{-0.1, 0.2, 0.3}), ValidationError);
}

TEST(BmOmwu, SwapRegretBoundedByInternal) {
  RunConfig c;
  c.dynamics = Dynamics::bm_omwu;
  c.horizon = 300;
  c.eta = 0.1;
  const Game g = random_game(2, {4, 4}, 6);
  const RunResult r = run_dynamics(g, c);
  for (std::size_t i = 0; i < 2; ++i) {
    const double internal = internal_regret_raw(r.trace, i);
    EXPECT_LE(swap_regret(r.trace, i), 4 * std::max(internal, 0.0) + 1e-9);
    EXPECT_GE(swap_regret(r.trace, i) + 1e-12, internal);
  }
  EXPECT_LE(r.summary.max_decomposition_gap, 1e-12);
}

}  // namespace
}  // namespace cedyn
