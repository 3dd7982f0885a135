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

#ifndef CEDYN_TRACE_HPP
#define CEDYN_TRACE_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "cedyn/error.hpp"
#include "cedyn/numeric.hpp"
#include "json.hpp"

namespace cedyn {

/// What one player did and saw in one round.
struct PlayerRound {
  SimplexVector strategy;
  Vector loss;
  // Inner learner state: the pair distribution (SL), the rows of Q (BM), the
  // tree distribution (arborescence) or the strategy itself (plain OMWU),
  // and the loss vector that learner observed this round. Empty when inner
  // recording is off.
  Vector inner;
  Vector inner_loss;
  double eta = 0.0;
  // The inner learner was restarted right before this round.
  bool restarted = false;

  friend bool operator==(const PlayerRound&, const PlayerRound&) = default;
};

/// Full record of a self-play run. rounds[t][i] is round t+1 of player i.
struct RunTrace {
  std::vector<std::size_t> action_counts;
  // Size of each independent simplex block inside PlayerRound::inner
  // (n(n-1) for SL, n for BM copies, n^(n-1) for trees, n for OMWU).
  std::vector<std::size_t> inner_block;
  std::vector<std::vector<PlayerRound>> rounds;

  std::size_t num_players() const { return action_counts.size(); }
  std::size_t horizon() const { return rounds.size(); }

  friend bool operator==(const RunTrace&, const RunTrace&) = default;
};

inline void to_json(nlohmann::json& j, const PlayerRound& r) {
  j = nlohmann::json{{"x", r.strategy}, {"loss", r.loss}, {"eta", r.eta}};
  if (!r.inner.empty()) {
    j["inner"] = r.inner;
    j["inner_loss"] = r.inner_loss;
  }
  if (r.restarted) j["restarted"] = true;
}

inline void from_json(const nlohmann::json& j, PlayerRound& r) {
  j.at("x").get_to(r.strategy);
  j.at("loss").get_to(r.loss);
  j.at("eta").get_to(r.eta);
  r.inner = j.value("inner", Vector{});
  r.inner_loss = j.value("inner_loss", Vector{});
  r.restarted = j.value("restarted", false);
}

inline nlohmann::json trace_to_json(const RunTrace& trace) {
  return nlohmann::json{{"actions", trace.action_counts},
                        {"inner_block", trace.inner_block},
                        {"rounds", trace.rounds}};
}

inline RunTrace trace_from_json(const nlohmann::json& j) {
  try {
    RunTrace trace;
    j.at("actions").get_to(trace.action_counts);
    j.at("inner_block").get_to(trace.inner_block);
    j.at("rounds").get_to(trace.rounds);
    for (const auto& round : trace.rounds)
      if (round.size() != trace.num_players())
        throw ValidationError("trace round has the wrong number of players");
    return trace;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid trace: ") + e.what());
  }
}

}  // namespace cedyn

#endif  // CEDYN_TRACE_HPP
