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

#ifndef CEDYN_GAME_HPP
#define CEDYN_GAME_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cedyn/error.hpp"
#include "cedyn/numeric.hpp"
#include "cedyn/rng.hpp"

namespace cedyn {

/// Finite normal-form game with per-player loss tensors in [0, 1].
///
/// Each tensor is stored dense and row-major over joint action profiles
/// (a_1, ..., a_m) with a_1 varying slowest. Actions are 0-based.
class Game {
 public:
  Game(std::vector<std::size_t> action_counts, std::vector<Vector> losses)
      : action_counts_(std::move(action_counts)), losses_(std::move(losses)) {
    if (action_counts_.size() < 2)
      throw ValidationError("a game needs at least 2 players, got " +
                            std::to_string(action_counts_.size()));
    for (std::size_t i = 0; i < action_counts_.size(); ++i)
      if (action_counts_[i] < 2)
        throw ValidationError("player " + std::to_string(i) +
                              " needs at least 2 actions");
    strides_.assign(action_counts_.size(), 1);
    for (std::size_t i = action_counts_.size() - 1; i > 0; --i)
      strides_[i - 1] = strides_[i] * action_counts_[i];
    num_profiles_ = strides_[0] * action_counts_[0];
    if (losses_.size() != action_counts_.size())
      throw ValidationError("expected " + std::to_string(action_counts_.size()) +
                            " loss tensors, got " +
                            std::to_string(losses_.size()));
    for (std::size_t i = 0; i < losses_.size(); ++i) {
      if (losses_[i].size() != num_profiles_)
        throw ValidationError("loss tensor of player " + std::to_string(i) +
                              " has " + std::to_string(losses_[i].size()) +
                              " entries, expected " +
                              std::to_string(num_profiles_));
      for (std::size_t f = 0; f < num_profiles_; ++f) {
        const double v = losses_[i][f];
        if (!(v >= 0.0 && v <= 1.0))
          throw ValidationError("loss of player " + std::to_string(i) +
                                " at profile " + std::to_string(f) + " is " +
                                std::to_string(v) + ", outside [0,1]");
      }
    }
  }

  std::size_t num_players() const { return action_counts_.size(); }
  std::size_t num_actions(std::size_t player) const {
    return action_counts_.at(player);
  }
  const std::vector<std::size_t>& action_counts() const {
    return action_counts_;
  }
  std::size_t num_profiles() const { return num_profiles_; }
  std::size_t stride(std::size_t player) const { return strides_.at(player); }

  std::size_t flat_index(std::span<const std::size_t> profile) const {
    std::size_t f = 0;
    for (std::size_t i = 0; i < profile.size(); ++i) f += profile[i] * strides_[i];
    return f;
  }

  double loss(std::size_t player, std::span<const std::size_t> profile) const {
    return losses_.at(player)[flat_index(profile)];
  }
  double loss_at(std::size_t player, std::size_t flat) const {
    return losses_[player][flat];
  }
  const Vector& losses(std::size_t player) const { return losses_.at(player); }

  friend bool operator==(const Game&, const Game&) = default;

 private:
  std::vector<std::size_t> action_counts_;
  std::vector<Vector> losses_;
  std::vector<std::size_t> strides_;
  std::size_t num_profiles_ = 0;
};

/// One mixed strategy per player.
using StrategyProfile = std::vector<SimplexVector>;

inline void validate_profile(const Game& game, const StrategyProfile& profile) {
  if (profile.size() != game.num_players())
    throw ValidationError("profile has " + std::to_string(profile.size()) +
                          " strategies for a " +
                          std::to_string(game.num_players()) + "-player game");
  for (std::size_t i = 0; i < profile.size(); ++i)
    if (profile[i].size() != game.num_actions(i))
      throw DimensionError(i, game.num_actions(i), profile[i].size());
}

/// Expected loss vector of `player` against the opponents' mixed strategies:
/// entry j is E_{a_-i ~ x_-i}[loss_i(j, a_-i)].
inline Vector expected_loss(const Game& game, const StrategyProfile& profile,
                            std::size_t player) {
  validate_profile(game, profile);
  const std::size_t m = game.num_players();
  Vector ell(game.num_actions(player), 0.0);
  std::vector<std::size_t> a(m, 0);
  const Vector& tensor = game.losses(player);
  for (std::size_t f = 0; f < game.num_profiles(); ++f) {
    double w = 1.0;
    for (std::size_t i = 0; i < m; ++i)
      if (i != player) w *= profile[i][a[i]];
    ell[a[player]] += tensor[f] * w;
    // Odometer over profiles, last player fastest.
    for (std::size_t i = m; i-- > 0;) {
      if (++a[i] < game.num_actions(i)) break;
      a[i] = 0;
    }
  }
  // Rounding can push a convex combination of [0,1] values a few ulps out.
  for (double& v : ell) v = std::clamp(v, 0.0, 1.0);
  return ell;
}

/// Game with i.i.d. uniform [0,1) losses drawn from a SplitMix64 stream.
/// Entries are drawn player by player, each tensor in flat order.
inline Game random_game(std::size_t num_players,
                        const std::vector<std::size_t>& action_counts,
                        std::uint64_t seed) {
  if (action_counts.size() != num_players)
    throw ValidationError("action_counts has " +
                          std::to_string(action_counts.size()) +
                          " entries for " + std::to_string(num_players) +
                          " players");
  if (num_players < 2) throw ValidationError("a game needs at least 2 players");
  std::size_t profiles = 1;
  for (std::size_t n : action_counts) {
    if (n < 2) throw ValidationError("every player needs at least 2 actions");
    profiles *= n;
  }
  SplitMix64 rng(seed);
  std::vector<Vector> losses(num_players, Vector(profiles));
  for (auto& tensor : losses)
    for (double& v : tensor) v = rng.uniform();
  return Game(action_counts, std::move(losses));
}

}  // namespace cedyn

#endif  // CEDYN_GAME_HPP
