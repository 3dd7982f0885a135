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

#ifndef CEDYN_INTERNAL_DYNAMICS_HPP
#define CEDYN_INTERNAL_DYNAMICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cedyn/error.hpp"
#include "cedyn/game.hpp"
#include "cedyn/markov_tree.hpp"
#include "cedyn/numeric.hpp"
#include "cedyn/omwu.hpp"

namespace cedyn {

enum class StationaryMethod { linear_solve, tree_theorem };

// Ordered action pairs (j -> k), j != k, in the order
// (0->1), (0->2), ..., (0->n-1), (1->0), (1->2), ..., (n-1->n-2).

inline std::size_t num_pairs(std::size_t n) { return n * (n - 1); }

inline std::size_t pair_index(std::size_t n, std::size_t from, std::size_t to) {
  return from * (n - 1) + (to < from ? to : to - 1);
}

inline std::pair<std::size_t, std::size_t> pair_at(std::size_t n,
                                                    std::size_t index) {
  const std::size_t from = index / (n - 1);
  std::size_t to = index % (n - 1);
  if (to >= from) ++to;
  return {from, to};
}

/// Pair loss L[j->k] = x[j] * (l[k] - l[j]).
inline Vector pair_loss(std::span<const double> x, std::span<const double> ell) {
  const std::size_t n = x.size();
  Vector out(num_pairs(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      if (j != k) out[pair_index(n, j, k)] = x[j] * (ell[k] - ell[j]);
  return out;
}

/// Row-stochastic chain with off-diagonal mass Q[j,k] = p[j->k] and the row
/// remainder 1 - sum_k p[j->k] on the diagonal. The stationary distribution
/// pi = Q^T pi is the fixed point of sum_{j!=k} p[j->k] E_{j->k}.
inline TransitionMatrix pair_transition_matrix(std::size_t n,
                                               std::span<const double> p) {
  Vector q(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double off = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      if (k != j) {
        q[j * n + k] = p[pair_index(n, j, k)];
        off += q[j * n + k];
      }
    q[j * n + j] = 1.0 - off;
  }
  return TransitionMatrix(n, std::move(q));
}

inline SimplexVector stationary(const TransitionMatrix& q,
                                StationaryMethod method) {
  return method == StationaryMethod::tree_theorem ? tree_theorem_stationary(q)
                                                  : detail::solve_stationary_nonnegative(q);
}

namespace detail {

inline void check_loss_range(std::span<const double> ell, std::size_t n,
                             double lo, double hi) {
  if (ell.size() != n)
    throw ValidationError("loss has dimension " + std::to_string(ell.size()) +
                          ", expected " + std::to_string(n));
  for (double v : ell)
    if (!(v >= lo && v <= hi))
      throw ValidationError("loss entry " + std::to_string(v) + " outside [" +
                            std::to_string(lo) + "," + std::to_string(hi) + "]");
}

}  // namespace detail

/// Internal-regret minimizer over n actions: one OMWU over the n(n-1)
/// ordered pairs, playing the stationary distribution of the induced chain.
class SlOmwu {
 public:
  SlOmwu(std::size_t n, double eta,
         StationaryMethod method = StationaryMethod::linear_solve,
         Prediction prediction = Prediction::optimistic)
      : n_(n), method_(method), pair_omwu_(checked_pairs(n), eta, prediction) {}

  const SimplexVector& next_strategy() {
    pair_distribution_ = pair_omwu_.next_strategy();
    matrix_ = pair_transition_matrix(n_, pair_distribution_);
    strategy_ = stationary(matrix_, method_);
    return *strategy_;
  }

  /// Feeds L[j->k] = x[j](l[k] - l[j]) to the pair learner. Requires a prior
  /// next_strategy() call this round and ||l||_inf <= 1.
  void observe_loss(std::span<const double> ell) {
    if (!strategy_)
      throw ValidationError("observe_loss called before next_strategy");
    detail::check_loss_range(ell, n_, -1.0, 1.0);
    pair_loss_ = pair_loss(*strategy_, ell);
    pair_omwu_.observe_loss(pair_loss_);
    strategy_.reset();
  }

  std::size_t num_actions() const { return n_; }
  double eta() const { return pair_omwu_.eta(); }
  const Omwu& pair_learner() const { return pair_omwu_; }
  const SimplexVector& pair_distribution() const { return pair_distribution_; }
  const Vector& last_pair_loss() const { return pair_loss_; }
  const TransitionMatrix& matrix() const { return matrix_; }

 private:
  static std::size_t checked_pairs(std::size_t n) {
    if (n < 2) throw ValidationError("SL-OMWU needs at least 2 actions");
    return num_pairs(n);
  }

  std::size_t n_;
  StationaryMethod method_;
  Omwu pair_omwu_;
  SimplexVector pair_distribution_;
  TransitionMatrix matrix_;
  std::optional<SimplexVector> strategy_;
  Vector pair_loss_;
};

inline constexpr std::size_t kMaxArborescenceActions = 5;

/// Tree loss: the pair loss summed over the tree's n-1 edges.
inline Vector tree_loss(const std::vector<Arborescence>& trees,
                        std::span<const double> pair_losses) {
  Vector out(trees.size());
  for (std::size_t t = 0; t < trees.size(); ++t) {
    const std::size_t n = trees[t].num_nodes();
    double s = 0.0;
    for (std::size_t v = 0; v < n; ++v)
      if (v != trees[t].root)
        s += pair_losses[pair_index(n, v, static_cast<std::size_t>(trees[t].parents[v]))];
    out[t] = s;
  }
  return out;
}

/// External-regret minimizer over all n^(n-1) arborescences; plays the
/// root marginal of its tree distribution. Limited to n <= 5.
class ArboDynamics {
 public:
  ArboDynamics(std::size_t n, double eta,
               Prediction prediction = Prediction::optimistic)
      : n_(n),
        trees_(&all_arborescences(checked(n))),
        tree_omwu_(trees_->size(), eta, prediction) {}

  const SimplexVector& next_strategy() {
    tree_distribution_ = tree_omwu_.next_strategy();
    SimplexVector x(n_, 0.0);
    for (std::size_t t = 0; t < trees_->size(); ++t)
      x[(*trees_)[t].root] += tree_distribution_[t];
    strategy_ = std::move(x);
    return *strategy_;
  }

  void observe_loss(std::span<const double> ell) {
    if (!strategy_)
      throw ValidationError("observe_loss called before next_strategy");
    detail::check_loss_range(ell, n_, -1.0, 1.0);
    tree_loss_ = tree_loss(*trees_, pair_loss(*strategy_, ell));
    tree_omwu_.observe_loss(tree_loss_);
    strategy_.reset();
  }

  std::size_t num_actions() const { return n_; }
  double eta() const { return tree_omwu_.eta(); }
  const std::vector<Arborescence>& trees() const { return *trees_; }
  const SimplexVector& tree_distribution() const { return tree_distribution_; }
  const Vector& last_tree_loss() const { return tree_loss_; }

 private:
  static std::size_t checked(std::size_t n) {
    if (n < 2 || n > kMaxArborescenceActions)
      throw ValidationError("arborescence dynamics support 2 <= n <= 5, got " +
                            std::to_string(n));
    return n;
  }

  std::size_t n_;
  const std::vector<Arborescence>* trees_;
  Omwu tree_omwu_;
  SimplexVector tree_distribution_;
  std::optional<SimplexVector> strategy_;
  Vector tree_loss_;
};

/// Residual of the proportionality between tree products of the pair
/// distribution and the tree distribution:
///   max_T |prod_{(a,b) in T} p[a->b] / X[T] - N| / N,  N from the first tree.
inline double proportionality_residual(const std::vector<Arborescence>& trees,
                                       std::span<const double> p,
                                       std::span<const double> tree_dist) {
  double norm = 0.0;
  double worst = 0.0;
  for (std::size_t t = 0; t < trees.size(); ++t) {
    const std::size_t n = trees[t].num_nodes();
    double prod = 1.0;
    for (std::size_t v = 0; v < n; ++v)
      if (v != trees[t].root)
        prod *= p[pair_index(n, v, static_cast<std::size_t>(trees[t].parents[v]))];
    const double ratio = prod / tree_dist[t];
    if (t == 0) norm = ratio;
    worst = std::max(worst, std::abs(ratio - norm) / norm);
  }
  return worst;
}

struct EquivalenceReport {
  std::size_t horizon = 0;
  double eta = 0.0;
  double tolerance = 0.0;
  double max_strategy_deviation = 0.0;
  double max_proportionality_residual = 0.0;
  std::vector<double> deviation_per_round;    // max over players
  std::vector<double> residual_per_round;     // max over players
  bool passed = false;
};

/// Runs SL-OMWU self-play (tree-theorem stationary solver) for `horizon`
/// rounds, then replays each player's loss stream into an arborescence
/// learner and compares strategies round by round.
inline EquivalenceReport verify_equivalence(const Game& game, double eta,
                                            std::size_t horizon, double tol) {
  const std::size_t m = game.num_players();
  for (std::size_t i = 0; i < m; ++i)
    if (game.num_actions(i) > kMaxArborescenceActions)
      throw ValidationError("equivalence check needs every player to have at "
                            "most 5 actions");
  std::vector<SlOmwu> sl;
  std::vector<ArboDynamics> arbo;
  for (std::size_t i = 0; i < m; ++i) {
    sl.emplace_back(game.num_actions(i), eta, StationaryMethod::tree_theorem);
    arbo.emplace_back(game.num_actions(i), eta);
  }

  EquivalenceReport report;
  report.horizon = horizon;
  report.eta = eta;
  report.tolerance = tol;
  report.deviation_per_round.assign(horizon, 0.0);
  report.residual_per_round.assign(horizon, 0.0);

  // Canonical run: SL-OMWU self-play, recording pair distributions and losses.
  std::vector<std::vector<SimplexVector>> x_sl(horizon, StrategyProfile(m));
  std::vector<std::vector<Vector>> p_sl(horizon, std::vector<Vector>(m));
  std::vector<std::vector<Vector>> losses(horizon, std::vector<Vector>(m));
  for (std::size_t t = 0; t < horizon; ++t) {
    for (std::size_t i = 0; i < m; ++i) {
      x_sl[t][i] = sl[i].next_strategy();
      p_sl[t][i] = sl[i].pair_distribution();
    }
    for (std::size_t i = 0; i < m; ++i) losses[t][i] = expected_loss(game, x_sl[t], i);
    for (std::size_t i = 0; i < m; ++i) sl[i].observe_loss(losses[t][i]);
  }

  // Replay into the arborescence learners.
  for (std::size_t t = 0; t < horizon; ++t) {
    for (std::size_t i = 0; i < m; ++i) {
      const SimplexVector& x = arbo[i].next_strategy();
      const double dev = inf_distance(x, x_sl[t][i]);
      const double res = proportionality_residual(arbo[i].trees(), p_sl[t][i],
                                                  arbo[i].tree_distribution());
      report.deviation_per_round[t] = std::max(report.deviation_per_round[t], dev);
      report.residual_per_round[t] = std::max(report.residual_per_round[t], res);
      arbo[i].observe_loss(losses[t][i]);
    }
    report.max_strategy_deviation =
        std::max(report.max_strategy_deviation, report.deviation_per_round[t]);
    report.max_proportionality_residual =
        std::max(report.max_proportionality_residual, report.residual_per_round[t]);
  }
  report.passed = report.max_strategy_deviation <= tol &&
                  report.max_proportionality_residual <= tol;
  return report;
}

}  // namespace cedyn

#endif  // CEDYN_INTERNAL_DYNAMICS_HPP
