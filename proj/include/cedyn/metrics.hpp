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

#ifndef CEDYN_METRICS_HPP
#define CEDYN_METRICS_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cedyn/error.hpp"
#include "cedyn/game.hpp"
#include "cedyn/numeric.hpp"
#include "cedyn/trace.hpp"

namespace cedyn {

/// Running regret statistics for one player.
///
/// Keeps S[g][k] = sum_t x_t[g] l_t[k], from which every comparator class is
/// read off: the pair objective of (j -> k) is S[j][j] - S[j][k], the best
/// swap function picks argmin_k S[g][k] per row, and sum_g S[g][k] is the
/// cumulative loss of the constant action k.
class RegretAccumulator {
 public:
  explicit RegretAccumulator(std::size_t n) : n_(n), s_(n * n, 0.0) {}

  void add(std::span<const double> x, std::span<const double> ell) {
    if (x.size() != n_ || ell.size() != n_)
      throw ValidationError("regret accumulator dimension mismatch");
    for (std::size_t g = 0; g < n_; ++g)
      for (std::size_t k = 0; k < n_; ++k) s_[g * n_ + k] += x[g] * ell[k];
    realized_ += dot(x, ell);
    ++rounds_;
  }

  std::size_t rounds() const { return rounds_; }
  double realized_loss() const { return realized_; }

  double external() const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n_; ++k) {
      double col = 0.0;
      for (std::size_t g = 0; g < n_; ++g) col += s_[g * n_ + k];
      best = std::min(best, col);
    }
    return realized_ - best;
  }

  /// sum_t x_t[j] (l_t[j] - l_t[k]).
  double pair_objective(std::size_t from, std::size_t to) const {
    return s_[from * n_ + from] - s_[from * n_ + to];
  }

  /// Max pair objective over the n(n-1) vertex transformations; may be
  /// negative.
  double internal_raw() const {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t k = 0; k < n_; ++k)
        if (j != k) best = std::max(best, pair_objective(j, k));
    return best;
  }

  double internal_clamped() const { return std::max(0.0, internal_raw()); }

  /// Best swap map; ties go to the lowest action index.
  std::vector<std::size_t> best_swap() const {
    std::vector<std::size_t> phi(n_);
    for (std::size_t g = 0; g < n_; ++g) {
      std::size_t arg = 0;
      for (std::size_t k = 1; k < n_; ++k)
        if (s_[g * n_ + k] < s_[g * n_ + arg]) arg = k;
      phi[g] = arg;
    }
    return phi;
  }

  double swap() const {
    const auto phi = best_swap();
    double comparator = 0.0;
    for (std::size_t g = 0; g < n_; ++g) comparator += s_[g * n_ + phi[g]];
    return realized_ - comparator;
  }

 private:
  std::size_t n_;
  Vector s_;
  double realized_ = 0.0;
  std::size_t rounds_ = 0;
};

inline RegretAccumulator accumulate(const RunTrace& trace, std::size_t player) {
  RegretAccumulator acc(trace.action_counts.at(player));
  for (const auto& round : trace.rounds)
    acc.add(round[player].strategy, round[player].loss);
  return acc;
}

/// sum_t <x_t, l_t> - min_j sum_t l_t[j].
inline double external_regret(const RunTrace& trace, std::size_t player) {
  return accumulate(trace, player).external();
}

/// max_{j != k} sum_t x_t[j] (l_t[j] - l_t[k]), not clamped.
inline double internal_regret_raw(const RunTrace& trace, std::size_t player) {
  return accumulate(trace, player).internal_raw();
}

inline double internal_regret_clamped(const RunTrace& trace, std::size_t player) {
  return accumulate(trace, player).internal_clamped();
}

/// sum_t <x_t, l_t> - sum_g min_k sum_t x_t[g] l_t[k].
inline double swap_regret(const RunTrace& trace, std::size_t player) {
  return accumulate(trace, player).swap();
}

inline std::vector<std::size_t> best_swap_map(const RunTrace& trace,
                                              std::size_t player) {
  return accumulate(trace, player).best_swap();
}

/// Dense joint distribution over action profiles, flat row-major with the
/// first player slowest (same layout as Game loss tensors).
struct ProductDistribution {
  std::vector<std::size_t> shape;
  Vector probs;
};

inline constexpr std::size_t kMaxDenseProfiles = 1000000;

/// (1/T) sum_t x_1^(t) ⊗ ... ⊗ x_m^(t). Throws if the tensor would exceed
/// `max_entries`; use ce_gap_streaming instead.
inline ProductDistribution average_product_distribution(
    const RunTrace& trace, std::size_t max_entries = kMaxDenseProfiles) {
  if (trace.horizon() == 0) throw ValidationError("empty trace");
  std::size_t size = 1;
  for (std::size_t n : trace.action_counts) {
    if (size > max_entries / n)
      throw ValidationError("average product distribution would exceed " +
                            std::to_string(max_entries) + " entries");
    size *= n;
  }
  ProductDistribution mu{trace.action_counts, Vector(size, 0.0)};
  const std::size_t m = trace.num_players();
  const double inv_t = 1.0 / static_cast<double>(trace.horizon());
  Vector block;
  for (const auto& round : trace.rounds) {
    // Build the outer product incrementally, player by player.
    block.assign(1, inv_t);
    for (std::size_t i = 0; i < m; ++i) {
      const auto& x = round[i].strategy;
      Vector next(block.size() * x.size());
      for (std::size_t b = 0; b < block.size(); ++b)
        for (std::size_t a = 0; a < x.size(); ++a)
          next[b * x.size() + a] = block[b] * x[a];
      block.swap(next);
    }
    for (std::size_t f = 0; f < size; ++f) mu.probs[f] += block[f];
  }
  return mu;
}

/// Largest CE deviation gain, with the maximizing player and pair, plus the
/// full per-player (n_i x n_i) table of deviation gains (diagonal zero).
struct CeGap {
  double value = -std::numeric_limits<double>::infinity();
  std::size_t player = 0;
  std::size_t from = 0;
  std::size_t to = 0;
  std::vector<Vector> per_pair;  // per_pair[i][j * n_i + k]
};

namespace detail {

inline void finalize_ce_gap(CeGap& gap, const std::vector<std::size_t>& counts) {
  for (std::size_t i = 0; i < counts.size(); ++i)
    for (std::size_t j = 0; j < counts[i]; ++j)
      for (std::size_t k = 0; k < counts[i]; ++k)
        if (j != k && gap.per_pair[i][j * counts[i] + k] > gap.value) {
          gap.value = gap.per_pair[i][j * counts[i] + k];
          gap.player = i;
          gap.from = j;
          gap.to = k;
        }
}

}  // namespace detail

/// max over players i and pairs j != k of
///   E_{a ~ mu}[ 1{a_i = j} (loss_i(a) - loss_i(k, a_-i)) ].
inline CeGap ce_gap(const Game& game, const ProductDistribution& mu) {
  if (mu.shape != game.action_counts() || mu.probs.size() != game.num_profiles())
    throw ValidationError("distribution shape does not match the game");
  const std::size_t m = game.num_players();
  CeGap gap;
  gap.per_pair.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    gap.per_pair[i].assign(game.num_actions(i) * game.num_actions(i), 0.0);
  std::vector<std::size_t> a(m, 0);
  for (std::size_t f = 0; f < game.num_profiles(); ++f) {
    const double w = mu.probs[f];
    if (w != 0.0) {
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t n = game.num_actions(i);
        const std::size_t j = a[i];
        const std::size_t base = f - j * game.stride(i);
        const double here = game.loss_at(i, f);
        for (std::size_t k = 0; k < n; ++k)
          if (k != j)
            gap.per_pair[i][j * n + k] +=
                w * (here - game.loss_at(i, base + k * game.stride(i)));
      }
    }
    for (std::size_t i = m; i-- > 0;) {
      if (++a[i] < game.num_actions(i)) break;
      a[i] = 0;
    }
  }
  detail::finalize_ce_gap(gap, game.action_counts());
  return gap;
}

/// CE gap of the trace's average product distribution without materializing
/// it: the deviation expectations are summed round by round through the
/// expected loss vectors recomputed from the game.
inline CeGap ce_gap_streaming(const Game& game, const RunTrace& trace) {
  if (trace.action_counts != game.action_counts())
    throw ValidationError("trace shape does not match the game");
  if (trace.horizon() == 0) throw ValidationError("empty trace");
  const std::size_t m = game.num_players();
  CeGap gap;
  gap.per_pair.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    gap.per_pair[i].assign(game.num_actions(i) * game.num_actions(i), 0.0);
  const double inv_t = 1.0 / static_cast<double>(trace.horizon());
  StrategyProfile profile(m);
  for (const auto& round : trace.rounds) {
    for (std::size_t i = 0; i < m; ++i) profile[i] = round[i].strategy;
    for (std::size_t i = 0; i < m; ++i) {
      const Vector ell = expected_loss(game, profile, i);
      const std::size_t n = ell.size();
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (j != k)
            gap.per_pair[i][j * n + k] += inv_t * profile[i][j] * (ell[j] - ell[k]);
    }
  }
  detail::finalize_ce_gap(gap, game.action_counts());
  return gap;
}

}  // namespace cedyn

#endif  // CEDYN_METRICS_HPP
