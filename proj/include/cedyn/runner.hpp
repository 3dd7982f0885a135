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

#ifndef CEDYN_RUNNER_HPP
#define CEDYN_RUNNER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cedyn/diagnostics.hpp"
#include "cedyn/error.hpp"
#include "cedyn/game.hpp"
#include "cedyn/internal_dynamics.hpp"
#include "cedyn/markov_tree.hpp"
#include "cedyn/metrics.hpp"
#include "cedyn/numeric.hpp"
#include "cedyn/omwu.hpp"
#include "cedyn/swap_dynamics.hpp"
#include "cedyn/trace.hpp"

namespace cedyn {

// `mwu` is plain (non-optimistic) multiplicative weights on the actions,
// kept as a baseline.
enum class Dynamics { omwu, mwu, sl_omwu, bm_omwu, arbo };
enum class EtaRule { fixed, theorem_internal, theorem_swap, adaptive };
enum class LogBase { natural, two };

inline std::string to_string(Dynamics d) {
  switch (d) {
    case Dynamics::omwu: return "omwu";
    case Dynamics::mwu: return "mwu";
    case Dynamics::sl_omwu: return "sl-omwu";
    case Dynamics::bm_omwu: return "bm-omwu";
    case Dynamics::arbo: return "arbo";
  }
  return "?";
}

inline std::string to_string(EtaRule r) {
  switch (r) {
    case EtaRule::fixed: return "fixed";
    case EtaRule::theorem_internal: return "theorem-internal";
    case EtaRule::theorem_swap: return "theorem-swap";
    case EtaRule::adaptive: return "adaptive";
  }
  return "?";
}

inline std::string to_string(LogBase b) { return b == LogBase::two ? "2" : "e"; }

inline Dynamics parse_dynamics(const std::string& s) {
  for (Dynamics d : {Dynamics::omwu, Dynamics::mwu, Dynamics::sl_omwu,
                     Dynamics::bm_omwu, Dynamics::arbo})
    if (to_string(d) == s) return d;
  throw ValidationError("unknown dynamics \"" + s + "\"");
}

inline EtaRule parse_eta_rule(const std::string& s) {
  for (EtaRule r : {EtaRule::fixed, EtaRule::theorem_internal,
                    EtaRule::theorem_swap, EtaRule::adaptive})
    if (to_string(r) == s) return r;
  throw ValidationError("unknown eta rule \"" + s + "\"");
}

inline LogBase parse_log_base(const std::string& s) {
  if (s == "e") return LogBase::natural;
  if (s == "2") return LogBase::two;
  throw ValidationError("log base must be \"e\" or \"2\", got \"" + s + "\"");
}

struct RunConfig {
  Dynamics dynamics = Dynamics::sl_omwu;
  std::size_t horizon = 1000;
  EtaRule eta_rule = EtaRule::fixed;
  double eta = 0.1;                  // used by EtaRule::fixed
  double schedule_constant = 1.0;    // C in the theorem schedules
  LogBase log_base = LogBase::natural;
  double check_constant = kVarianceCheckConstant;  // C' for the adaptive rule
  std::uint64_t seed = 0;
  std::string game_source;           // echoed in the summary
  bool record_inner = true;
  std::size_t smoothness_order = 0;  // 0 disables the smoothness report
  double smoothness_alpha = 0.0;     // 0 selects 1/(H+3)
  double rvu_constant = 64.0;        // 0 disables the RVU check
  bool stability = true;
};

/// log T in the configured base, floored at 1 so T = 1, 2 give finite rates.
inline double schedule_log(std::size_t horizon, LogBase base) {
  const double t = static_cast<double>(horizon);
  const double l = base == LogBase::two ? std::log2(t) : std::log(t);
  return std::max(1.0, l);
}

/// eta = 1 / (C m log^4 T).
inline double theorem_internal_eta(std::size_t num_players, std::size_t horizon,
                                   double constant, LogBase base = LogBase::natural) {
  return 1.0 / (constant * static_cast<double>(num_players) *
                std::pow(schedule_log(horizon, base), 4.0));
}

/// eta = 1 / (C m n^3 log^4 T).
inline double theorem_swap_eta(std::size_t num_players, std::size_t num_actions,
                               std::size_t horizon, double constant,
                               LogBase base = LogBase::natural) {
  const double n = static_cast<double>(num_actions);
  return 1.0 / (constant * static_cast<double>(num_players) * n * n * n *
                std::pow(schedule_log(horizon, base), 4.0));
}

/// Robust rate sqrt(log(d) / T) used after the adaptive switch.
inline double adversarial_eta(std::size_t inner_dimension, std::size_t horizon) {
  return std::sqrt(std::log(static_cast<double>(inner_dimension)) /
                   static_cast<double>(horizon));
}

/// Common interface over the per-player learners used in self-play.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual const SimplexVector& next_strategy() = 0;
  virtual void observe_loss(std::span<const double> ell) = 0;
  /// Inner distribution behind the last next_strategy() call.
  virtual Vector inner() const = 0;
  /// Loss vector the inner learner saw in the last observe_loss() call.
  virtual Vector inner_loss() const = 0;
  virtual std::size_t inner_block() const = 0;
  virtual double eta() const = 0;
  /// ||Q^T x - x||_inf of the last fixed-point solve, 0 if none.
  virtual double stationary_residual() const { return 0.0; }
  /// BM loss-decomposition gap of the last round, 0 if not applicable.
  virtual double decomposition_gap() const { return 0.0; }
};

namespace detail {

class OmwuLearner final : public Learner {
 public:
  OmwuLearner(std::size_t n, double eta, Prediction prediction)
      : omwu_(n, eta, prediction) {}
  const SimplexVector& next_strategy() override {
    x_ = omwu_.next_strategy();
    return x_;
  }
  void observe_loss(std::span<const double> ell) override {
    check_loss_range(ell, omwu_.dimension(), 0.0, 1.0);
    omwu_.observe_loss(ell);
  }
  Vector inner() const override { return x_; }
  Vector inner_loss() const override { return omwu_.last_loss(); }
  std::size_t inner_block() const override { return omwu_.dimension(); }
  double eta() const override { return omwu_.eta(); }

 private:
  Omwu omwu_;
  SimplexVector x_;
};

class SlLearner final : public Learner {
 public:
  SlLearner(std::size_t n, double eta) : sl_(n, eta) {}
  const SimplexVector& next_strategy() override {
    const SimplexVector& x = sl_.next_strategy();
    residual_ = cedyn::stationary_residual(sl_.matrix(), x);
    return x;
  }
  void observe_loss(std::span<const double> ell) override { sl_.observe_loss(ell); }
  Vector inner() const override { return sl_.pair_distribution(); }
  Vector inner_loss() const override { return sl_.last_pair_loss(); }
  std::size_t inner_block() const override { return num_pairs(sl_.num_actions()); }
  double eta() const override { return sl_.eta(); }
  double stationary_residual() const override { return residual_; }

 private:
  SlOmwu sl_;
  double residual_ = 0.0;
};

class BmLearner final : public Learner {
 public:
  BmLearner(std::size_t n, double eta) : bm_(n, eta) {}
  const SimplexVector& next_strategy() override {
    const SimplexVector& x = bm_.next_strategy();
    residual_ = cedyn::stationary_residual(bm_.matrix(), x);
    return x;
  }
  void observe_loss(std::span<const double> ell) override { bm_.observe_loss(ell); }
  Vector inner() const override { return bm_.matrix().data(); }
  Vector inner_loss() const override { return bm_.last_scaled_losses(); }
  std::size_t inner_block() const override { return bm_.num_actions(); }
  double eta() const override { return bm_.eta(); }
  double stationary_residual() const override { return residual_; }
  double decomposition_gap() const override { return bm_.last_decomposition_gap(); }

 private:
  BmOmwu bm_;
  double residual_ = 0.0;
};

class ArboLearner final : public Learner {
 public:
  ArboLearner(std::size_t n, double eta) : arbo_(n, eta) {}
  const SimplexVector& next_strategy() override { return arbo_.next_strategy(); }
  void observe_loss(std::span<const double> ell) override { arbo_.observe_loss(ell); }
  Vector inner() const override { return arbo_.tree_distribution(); }
  Vector inner_loss() const override { return arbo_.last_tree_loss(); }
  std::size_t inner_block() const override { return arbo_.trees().size(); }
  double eta() const override { return arbo_.eta(); }

 private:
  ArboDynamics arbo_;
};

}  // namespace detail

inline std::unique_ptr<Learner> make_learner(Dynamics dynamics, std::size_t n,
                                             double eta) {
  switch (dynamics) {
    case Dynamics::omwu:
      return std::make_unique<detail::OmwuLearner>(n, eta, Prediction::optimistic);
    case Dynamics::mwu:
      return std::make_unique<detail::OmwuLearner>(n, eta, Prediction::none);
    case Dynamics::sl_omwu: return std::make_unique<detail::SlLearner>(n, eta);
    case Dynamics::bm_omwu: return std::make_unique<detail::BmLearner>(n, eta);
    case Dynamics::arbo: return std::make_unique<detail::ArboLearner>(n, eta);
  }
  throw ValidationError("unknown dynamics");
}

/// Watches the running variance inequality
///   sum_s Var_{p_s}(L_s - L_{s-1}) <= 1/2 sum_s Var_{p_s}(L_{s-1}) + C' H^5,
/// H = ceil(log2 T), and on its first violation switches permanently to the
/// robust rate sqrt(log(d) / T). The caller restarts the learner.
class AdaptiveEtaController {
 public:
  AdaptiveEtaController(std::size_t horizon, std::size_t inner_block,
                        double constant)
      : horizon_(horizon),
        block_(inner_block),
        constant_(constant),
        order_(default_difference_order(horizon)) {}

  /// Feeds round t (1-based): the inner distribution that was played and the
  /// inner loss then observed. Returns the new learning rate on a switch.
  std::optional<double> observe(std::size_t t, std::span<const double> q,
                                std::span<const double> z) {
    if (switched_) return std::nullopt;
    if (prev_.size() != z.size()) prev_.assign(z.size(), 0.0);
    Vector diff(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) diff[j] = z[j] - prev_[j];
    lhs_ += block_variance(q, diff, block_);
    var_sum_ += block_variance(q, prev_, block_);
    prev_.assign(z.begin(), z.end());
    if (!report().holds) {
      switched_ = true;
      switch_round_ = t;
      return adversarial_eta(block_, horizon_);
    }
    return std::nullopt;
  }

  VarianceCheckReport report() const {
    return make_variance_check(lhs_, var_sum_, order_, constant_);
  }
  bool switched() const { return switched_; }
  std::size_t switch_round() const { return switch_round_; }
  double robust_eta() const { return adversarial_eta(block_, horizon_); }

 private:
  std::size_t horizon_;
  std::size_t block_;
  double constant_;
  std::size_t order_;
  double lhs_ = 0.0;
  double var_sum_ = 0.0;
  Vector prev_;
  bool switched_ = false;
  std::size_t switch_round_ = 0;
};

/// One CSV row: a player's running metrics after round t.
struct RoundRow {
  std::size_t t = 0;
  std::size_t player = 0;
  double external_regret = 0.0;
  double internal_regret_raw = 0.0;
  double internal_regret_clamped = 0.0;
  double swap_regret = 0.0;
  double ce_gap_running = 0.0;
  double eta = 0.0;
  double max_consec_ratio = 1.0;
};

struct PlayerSummary {
  double external_regret = 0.0;
  double internal_regret_raw = 0.0;
  double internal_regret_clamped = 0.0;
  double swap_regret = 0.0;
  double initial_eta = 0.0;
  double final_eta = 0.0;
  double max_consec_ratio = 1.0;
  bool stability_pass = true;
  bool switched = false;
  std::size_t switch_round = 0;
  std::optional<VarianceCheckReport> variance_check;
  std::optional<RvuReport> rvu;
  std::optional<SmoothnessReport> smoothness;
};

struct RunSummary {
  RunConfig config;
  std::vector<std::size_t> action_counts;
  std::size_t horizon = 0;
  std::vector<PlayerSummary> players;
  double ce_gap = 0.0;               // from the average product distribution
  std::string ce_gap_mode;           // "dense" or "streaming"
  double ce_gap_from_regret = 0.0;   // max_i internal_regret_raw_i / T
  double coarse_ce_gap = 0.0;        // max_i external_regret_i / T
  double max_stationary_residual = 0.0;
  double max_decomposition_gap = 0.0;
  bool stability_pass = true;
};

struct RunResult {
  RunTrace trace;
  std::vector<RoundRow> rows;
  RunSummary summary;
};

inline void validate_config(const Game& game, const RunConfig& config) {
  if (config.horizon < 1) throw ValidationError("horizon must be at least 1");
  if (config.eta_rule == EtaRule::fixed &&
      (!(config.eta > 0.0) || !std::isfinite(config.eta)))
    throw ValidationError("fixed learning rate must be positive");
  if (!(config.schedule_constant > 0.0))
    throw ValidationError("schedule constant must be positive");
  if (config.dynamics == Dynamics::arbo)
    for (std::size_t i = 0; i < game.num_players(); ++i)
      if (game.num_actions(i) > kMaxArborescenceActions)
        throw ValidationError("arbo dynamics need every player to have at most 5 "
                              "actions");
  if (config.smoothness_order > 0 && config.smoothness_order >= config.horizon)
    throw ValidationError("smoothness order must be below the horizon");
}

/// Initial learning rate of a player under the configured rule. The adaptive
/// rule starts from the theorem schedule matching the dynamics.
inline double initial_eta(const Game& game, const RunConfig& config,
                          std::size_t player) {
  const std::size_t m = game.num_players();
  const std::size_t n = game.num_actions(player);
  switch (config.eta_rule) {
    case EtaRule::fixed: return config.eta;
    case EtaRule::theorem_internal:
      return theorem_internal_eta(m, config.horizon, config.schedule_constant,
                                  config.log_base);
    case EtaRule::theorem_swap:
      return theorem_swap_eta(m, n, config.horizon, config.schedule_constant,
                              config.log_base);
    case EtaRule::adaptive:
      return config.dynamics == Dynamics::bm_omwu
                 ? theorem_swap_eta(m, n, config.horizon, config.schedule_constant,
                                    config.log_base)
                 : theorem_internal_eta(m, config.horizon, config.schedule_constant,
                                        config.log_base);
  }
  return config.eta;
}

/// Self-play for config.horizon rounds. Each round freezes the profile of
/// all players, computes every expected loss from it, then updates every
/// learner. Deterministic given (game, config).
inline RunResult run_dynamics(const Game& game, const RunConfig& config) {
  validate_config(game, config);
  const std::size_t m = game.num_players();
  const std::size_t horizon = config.horizon;

  std::vector<std::unique_ptr<Learner>> learners;
  std::vector<std::optional<AdaptiveEtaController>> controllers(m);
  std::vector<RegretAccumulator> regrets;
  RunResult result;
  RunSummary& summary = result.summary;
  summary.config = config;
  summary.action_counts = game.action_counts();
  summary.horizon = horizon;
  summary.players.resize(m);

  RunTrace& trace = result.trace;
  trace.action_counts = game.action_counts();
  for (std::size_t i = 0; i < m; ++i) {
    const double eta = initial_eta(game, config, i);
    learners.push_back(make_learner(config.dynamics, game.num_actions(i), eta));
    trace.inner_block.push_back(learners.back()->inner_block());
    regrets.emplace_back(game.num_actions(i));
    summary.players[i].initial_eta = eta;
    if (config.eta_rule == EtaRule::adaptive)
      controllers[i].emplace(horizon, learners.back()->inner_block(),
                             config.check_constant);
  }
  trace.rounds.reserve(horizon);
  result.rows.reserve(horizon * m);

  std::vector<Vector> prev_inner(m);
  std::vector<bool> restarted(m, false);
  StrategyProfile profile(m);
  for (std::size_t t = 1; t <= horizon; ++t) {
    std::vector<PlayerRound> round(m);
    for (std::size_t i = 0; i < m; ++i) {
      profile[i] = learners[i]->next_strategy();
      summary.max_stationary_residual =
          std::max(summary.max_stationary_residual, learners[i]->stationary_residual());
    }
    for (std::size_t i = 0; i < m; ++i) {
      PlayerRound& r = round[i];
      r.strategy = profile[i];
      r.loss = expected_loss(game, profile, i);
      r.eta = learners[i]->eta();
      r.restarted = restarted[i];
    }
    for (std::size_t i = 0; i < m; ++i) {
      PlayerRound& r = round[i];
      PlayerSummary& ps = summary.players[i];
      Vector inner = learners[i]->inner();
      learners[i]->observe_loss(r.loss);
      Vector inner_loss = learners[i]->inner_loss();
      summary.max_decomposition_gap =
          std::max(summary.max_decomposition_gap, learners[i]->decomposition_gap());
      regrets[i].add(r.strategy, r.loss);

      if (!prev_inner[i].empty() && !restarted[i]) {
        const double ratio = max_ratio(prev_inner[i], inner);
        ps.max_consec_ratio = std::max(ps.max_consec_ratio, ratio);
        if (ratio > std::exp(6.0 * r.eta) * (1.0 + kStabilitySlack))
          ps.stability_pass = false;
      }
      restarted[i] = false;

      if (controllers[i]) {
        if (auto eta = controllers[i]->observe(t, inner, inner_loss)) {
          learners[i] = make_learner(config.dynamics, game.num_actions(i), *eta);
          restarted[i] = true;
          ps.switched = true;
          ps.switch_round = t;
        }
      }
      prev_inner[i] = inner;
      if (config.record_inner) {
        r.inner = std::move(inner);
        r.inner_loss = std::move(inner_loss);
      }
    }
    trace.rounds.push_back(std::move(round));

    double ce_running = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i)
      ce_running = std::max(ce_running,
                            regrets[i].internal_raw() / static_cast<double>(t));
    for (std::size_t i = 0; i < m; ++i) {
      RoundRow row;
      row.t = t;
      row.player = i;
      row.external_regret = regrets[i].external();
      row.internal_regret_raw = regrets[i].internal_raw();
      row.internal_regret_clamped = regrets[i].internal_clamped();
      row.swap_regret = regrets[i].swap();
      row.ce_gap_running = ce_running;
      row.eta = trace.rounds.back()[i].eta;
      row.max_consec_ratio = summary.players[i].max_consec_ratio;
      result.rows.push_back(row);
    }
  }

  const double tt = static_cast<double>(horizon);
  summary.ce_gap_from_regret = -std::numeric_limits<double>::infinity();
  summary.coarse_ce_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    PlayerSummary& ps = summary.players[i];
    ps.external_regret = regrets[i].external();
    ps.internal_regret_raw = regrets[i].internal_raw();
    ps.internal_regret_clamped = regrets[i].internal_clamped();
    ps.swap_regret = regrets[i].swap();
    ps.final_eta = learners[i]->eta();
    summary.stability_pass = summary.stability_pass && ps.stability_pass;
    summary.ce_gap_from_regret = std::max(summary.ce_gap_from_regret,
                                          ps.internal_regret_raw / tt);
    summary.coarse_ce_gap = std::max(summary.coarse_ce_gap, ps.external_regret / tt);
  }
  if (game.num_profiles() <= kMaxDenseProfiles) {
    summary.ce_gap = ce_gap(game, average_product_distribution(trace)).value;
    summary.ce_gap_mode = "dense";
  } else {
    summary.ce_gap = ce_gap_streaming(game, trace).value;
    summary.ce_gap_mode = "streaming";
  }

  if (config.record_inner) {
    for (std::size_t i = 0; i < m; ++i) {
      PlayerSummary& ps = summary.players[i];
      ps.variance_check = check_variance_inequality(trace, i, config.check_constant);
      if (config.eta_rule != EtaRule::adaptive && config.rvu_constant > 0.0 &&
          config.dynamics != Dynamics::mwu)
        ps.rvu = rvu_check(trace, i, ps.final_eta, config.rvu_constant);
      if (config.dynamics == Dynamics::sl_omwu && config.smoothness_order > 0) {
        const double alpha =
            config.smoothness_alpha > 0.0
                ? config.smoothness_alpha
                : 1.0 / (static_cast<double>(config.smoothness_order) + 3.0);
        ps.smoothness = smoothness_report(trace, i, config.smoothness_order, alpha);
      }
    }
  }
  return result;
}

}  // namespace cedyn

#endif  // CEDYN_RUNNER_HPP
