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

#ifndef CEDYN_DIAGNOSTICS_HPP
#define CEDYN_DIAGNOSTICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "cedyn/error.hpp"
#include "cedyn/numeric.hpp"
#include "cedyn/trace.hpp"

namespace cedyn {

/// Finite differences of a vector sequence:
///   D_0 z = z,  (D_h z)^(t) = (D_{h-1} z)^(t+1) - (D_{h-1} z)^(t).
/// Order h holds T - h vectors; at(h, t) uses 0-based t.
class FiniteDiffTable {
 public:
  FiniteDiffTable() = default;
  explicit FiniteDiffTable(std::vector<std::vector<Vector>> orders)
      : orders_(std::move(orders)) {}

  std::size_t max_order() const { return orders_.size() - 1; }
  std::size_t length(std::size_t h) const { return orders_.at(h).size(); }
  const std::vector<Vector>& order(std::size_t h) const { return orders_.at(h); }
  const Vector& at(std::size_t h, std::size_t t) const { return orders_.at(h).at(t); }

 private:
  std::vector<std::vector<Vector>> orders_;
};

inline FiniteDiffTable finite_differences(const std::vector<Vector>& sequence,
                                          std::size_t max_order) {
  if (sequence.empty() || max_order + 1 > sequence.size())
    throw ValidationError("finite difference order " + std::to_string(max_order) +
                          " needs more than " + std::to_string(sequence.size()) +
                          " terms");
  std::vector<std::vector<Vector>> orders;
  orders.reserve(max_order + 1);
  orders.push_back(sequence);
  for (std::size_t h = 1; h <= max_order; ++h) {
    const auto& prev = orders.back();
    std::vector<Vector> cur(prev.size() - 1);
    for (std::size_t t = 0; t + 1 < prev.size(); ++t) {
      cur[t].resize(prev[t].size());
      for (std::size_t j = 0; j < prev[t].size(); ++j)
        cur[t][j] = prev[t + 1][j] - prev[t][j];
    }
    orders.push_back(std::move(cur));
  }
  return FiniteDiffTable(std::move(orders));
}

inline double binomial_coefficient(std::size_t h, std::size_t s) {
  if (s > h) return 0.0;
  s = std::min(s, h - s);
  double c = 1.0;
  for (std::size_t r = 1; r <= s; ++r)
    c = c * static_cast<double>(h - s + r) / static_cast<double>(r);
  return std::round(c);
}

/// Pairwise (cascade) summation.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

/// (D_h z)^(t) = sum_s C(h,s) (-1)^(h-s) z^(t+s), 0-based t, evaluated
/// entrywise with pairwise summation.
inline Vector binomial_difference(const std::vector<Vector>& sequence,
                                  std::size_t h, std::size_t t) {
  if (t + h >= sequence.size())
    throw ValidationError("binomial difference runs past the sequence");
  const std::size_t dim = sequence[t].size();
  Vector out(dim);
  Vector terms(h + 1);
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t s = 0; s <= h; ++s) {
      const double sign = ((h - s) % 2 == 0) ? 1.0 : -1.0;
      terms[s] = sign * binomial_coefficient(h, s) * sequence[t + s][j];
    }
    out[j] = pairwise_sum(terms);
  }
  return out;
}

/// Var_q(z) = sum_j q_j (z_j - <q, z>)^2.
inline double variance(std::span<const double> q, std::span<const double> z) {
  if (q.size() != z.size())
    throw ValidationError("variance: distribution has dimension " +
                          std::to_string(q.size()) + ", vector has " +
                          std::to_string(z.size()));
  const double mean = dot(q, z);
  double v = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) v += q[j] * (z[j] - mean) * (z[j] - mean);
  return v;
}

/// Sum of per-block variances for a vector made of `block`-sized simplex
/// blocks (one block for SL/OMWU, n blocks for BM copies).
inline double block_variance(std::span<const double> q, std::span<const double> z,
                             std::size_t block) {
  double v = 0.0;
  for (std::size_t b = 0; b + block <= q.size(); b += block)
    v += variance(q.subspan(b, block), z.subspan(b, block));
  return v;
}

namespace detail {

inline void require_inner(const RunTrace& trace, std::size_t player) {
  if (player >= trace.num_players())
    throw ValidationError("player " + std::to_string(player) + " out of range");
  for (const auto& round : trace.rounds)
    if (round[player].inner.empty())
      throw ValidationError("trace has no inner-learner record for player " +
                            std::to_string(player));
}

inline std::vector<Vector> inner_losses(const RunTrace& trace, std::size_t player) {
  std::vector<Vector> seq;
  seq.reserve(trace.horizon());
  for (const auto& round : trace.rounds) seq.push_back(round[player].inner_loss);
  return seq;
}

inline double max_eta(const RunTrace& trace, std::size_t player) {
  double eta = 0.0;
  for (const auto& round : trace.rounds) eta = std::max(eta, round[player].eta);
  return eta;
}

}  // namespace detail

/// Bound on ||(D_h L)^(t)||_inf for SL-OMWU pair losses: alpha^h h^(3h+1)
/// for h >= 1, and 1 for h = 0.
inline double smoothness_bound(std::size_t h, double alpha) {
  if (h == 0) return 1.0;
  const double hd = static_cast<double>(h);
  return std::pow(alpha, hd) * std::pow(hd, 3.0 * hd + 1.0);
}

/// Learning-rate ceiling under which the smoothness bound is guaranteed.
inline double smoothness_eta_limit(double alpha, std::size_t num_players) {
  return alpha / (36.0 * std::exp(5.0) * static_cast<double>(num_players));
}

/// Looser ceiling stated without the e^5 factor; reported only.
inline double smoothness_eta_limit_loose(double alpha, std::size_t num_players) {
  return alpha / (36.0 * static_cast<double>(num_players));
}

struct SmoothnessEntry {
  std::size_t h = 0;
  std::size_t t = 0;  // 1-based round index
  double observed = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct SmoothnessReport {
  std::size_t max_order = 0;
  double alpha = 0.0;
  double eta = 0.0;
  double eta_limit = 0.0;
  double eta_limit_loose = 0.0;
  bool preconditions_met = false;        // eta <= eta_limit and alpha <= 1/(H+3)
  bool loose_preconditions_met = false;  // eta <= eta_limit_loose
  bool all_pass = false;                 // every entry within its bound
  double worst_ratio = 0.0;              // max observed / bound
  std::vector<SmoothnessEntry> entries;
};

/// Finite differences of the pair losses seen by a player's pair learner
/// against the higher-order smoothness bound. Pass/fail is only a verdict
/// when preconditions_met; otherwise the table is observational.
inline SmoothnessReport smoothness_report(const RunTrace& trace, std::size_t player,
                                          std::size_t max_order, double alpha) {
  detail::require_inner(trace, player);
  const std::vector<Vector> seq = detail::inner_losses(trace, player);
  const FiniteDiffTable table = finite_differences(seq, max_order);
  SmoothnessReport r;
  r.max_order = max_order;
  r.alpha = alpha;
  r.eta = detail::max_eta(trace, player);
  r.eta_limit = smoothness_eta_limit(alpha, trace.num_players());
  r.eta_limit_loose = smoothness_eta_limit_loose(alpha, trace.num_players());
  r.preconditions_met =
      r.eta <= r.eta_limit && alpha <= 1.0 / (static_cast<double>(max_order) + 3.0);
  r.loose_preconditions_met = r.eta <= r.eta_limit_loose;
  r.all_pass = true;
  for (std::size_t h = 0; h <= max_order; ++h) {
    const double bound = smoothness_bound(h, alpha);
    for (std::size_t t = 0; t < table.length(h); ++t) {
      SmoothnessEntry e{h, t + 1, inf_norm(table.at(h, t)), bound, false};
      e.pass = e.observed <= e.bound;
      r.all_pass = r.all_pass && e.pass;
      r.worst_ratio = std::max(r.worst_ratio, e.observed / e.bound);
      r.entries.push_back(e);
    }
  }
  return r;
}

struct RvuReport {
  double lhs = 0.0;             // measured external regret of the inner learner
  double rhs = 0.0;             // log term uses the inner dimension
  double rhs_log_actions = 0.0; // same bound with log(n_i) in the leading term
  double slack = 0.0;           // rhs - lhs
  double eta = 0.0;
  double constant = 0.0;
  bool holds = false;
};

/// Compares the inner learner's external regret with
///   2 log(d)/eta + sum_t (eta/2 + C eta^2) Var_{p_t}(L_t - L_{t-1})
///                - sum_t (1 - C eta) eta / 2 Var_{p_t}(L_{t-1}),
/// with L_0 = 0 and d the inner simplex dimension, per block and summed.
inline RvuReport rvu_check(const RunTrace& trace, std::size_t player, double eta,
                           double constant) {
  detail::require_inner(trace, player);
  const std::size_t block = trace.inner_block.at(player);
  const std::size_t dim = trace.rounds.empty() ? block : trace.rounds[0][player].inner.size();
  const std::size_t blocks = dim / block;
  const double n_actions = static_cast<double>(trace.action_counts[player]);

  double realized = 0.0;
  Vector cumulative(dim, 0.0);
  double var_diff = 0.0, var_prev = 0.0;
  Vector prev(dim, 0.0), diff(dim);
  for (const auto& round : trace.rounds) {
    const auto& q = round[player].inner;
    const auto& z = round[player].inner_loss;
    realized += dot(q, z);
    for (std::size_t j = 0; j < dim; ++j) {
      cumulative[j] += z[j];
      diff[j] = z[j] - prev[j];
    }
    var_diff += block_variance(q, diff, block);
    var_prev += block_variance(q, prev, block);
    prev = z;
  }
  double best = 0.0;
  for (std::size_t b = 0; b < blocks; ++b)
    best += *std::min_element(cumulative.begin() + static_cast<std::ptrdiff_t>(b * block),
                              cumulative.begin() + static_cast<std::ptrdiff_t>((b + 1) * block));

  const double variance_terms = (eta / 2.0 + constant * eta * eta) * var_diff -
                                (1.0 - constant * eta) * eta / 2.0 * var_prev;
  RvuReport r;
  r.eta = eta;
  r.constant = constant;
  r.lhs = realized - best;
  r.rhs = static_cast<double>(blocks) * 2.0 * std::log(static_cast<double>(block)) / eta +
          variance_terms;
  r.rhs_log_actions =
      static_cast<double>(blocks) * 2.0 * std::log(n_actions) / eta + variance_terms;
  r.slack = r.rhs - r.lhs;
  r.holds = r.lhs <= r.rhs;
  return r;
}

inline constexpr double kVarianceCheckConstant = 165262.0;

/// H = ceil(log2 T), at least 1.
inline std::size_t default_difference_order(std::size_t horizon) {
  std::size_t h = 0;
  while ((std::size_t{1} << h) < horizon) ++h;
  return std::max<std::size_t>(h, 1);
}

struct VarianceCheckReport {
  double lhs = 0.0;              // sum_t Var_{p_t}(L_t - L_{t-1})
  double variance_sum = 0.0;     // sum_t Var_{p_t}(L_{t-1})
  std::size_t order = 0;         // H
  double constant = 0.0;         // C'
  double rhs = 0.0;              // variance_sum / 2 + C' H^5
  double min_constant = 0.0;     // smallest C' >= 0 for which the check holds
  bool holds = false;
};

inline VarianceCheckReport make_variance_check(double lhs, double variance_sum,
                                               std::size_t order, double constant) {
  VarianceCheckReport r;
  r.lhs = lhs;
  r.variance_sum = variance_sum;
  r.order = order;
  r.constant = constant;
  const double h5 = std::pow(static_cast<double>(order), 5.0);
  r.rhs = 0.5 * variance_sum + constant * h5;
  r.min_constant = std::max(0.0, (lhs - 0.5 * variance_sum) / h5);
  r.holds = lhs <= r.rhs;
  return r;
}

/// Checks sum_t Var_{p_t}(L_t - L_{t-1}) <= 1/2 sum_t Var_{p_t}(L_{t-1}) + C' H^5
/// with H = ceil(log2 T). Block variances are summed for multi-copy learners.
inline VarianceCheckReport check_variance_inequality(
    const RunTrace& trace, std::size_t player,
    double constant = kVarianceCheckConstant) {
  detail::require_inner(trace, player);
  const std::size_t block = trace.inner_block.at(player);
  double lhs = 0.0, var_sum = 0.0;
  Vector prev, diff;
  for (const auto& round : trace.rounds) {
    const auto& q = round[player].inner;
    const auto& z = round[player].inner_loss;
    if (prev.size() != z.size()) prev.assign(z.size(), 0.0);
    diff.resize(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) diff[j] = z[j] - prev[j];
    lhs += block_variance(q, diff, block);
    var_sum += block_variance(q, prev, block);
    prev = z;
  }
  return make_variance_check(lhs, var_sum,
                             default_difference_order(trace.horizon()), constant);
}

struct StabilityReport {
  double max_ratio = 1.0;      // max consecutive entrywise ratio
  double eta = 0.0;
  double exp_bound = 1.0;      // exp(6 eta)
  double linear_bound = 1.0;   // 1 + 7 eta
  bool pass_exp = false;
  bool pass_linear = false;
};

// Relative slack for rounding in the exp/log round trip of the iterates.
inline constexpr double kStabilitySlack = 1e-12;

/// Max over rounds and entries of max(q_{t+1}/q_t, q_t/q_{t+1}) for the
/// inner learner's distributions, skipping round pairs that straddle a
/// restart, compared against exp(6 eta) and 1 + 7 eta.
inline StabilityReport stability_check(const RunTrace& trace, std::size_t player,
                                       double eta) {
  detail::require_inner(trace, player);
  StabilityReport r;
  r.eta = eta;
  for (std::size_t t = 0; t + 1 < trace.horizon(); ++t) {
    const auto& next = trace.rounds[t + 1][player];
    if (next.restarted) continue;
    r.max_ratio = std::max(r.max_ratio, max_ratio(trace.rounds[t][player].inner, next.inner));
  }
  r.exp_bound = std::exp(6.0 * eta);
  r.linear_bound = 1.0 + 7.0 * eta;
  r.pass_exp = r.max_ratio <= r.exp_bound * (1.0 + kStabilitySlack);
  r.pass_linear = r.max_ratio <= r.linear_bound * (1.0 + kStabilitySlack);
  return r;
}

/// Same check using the learning rate recorded in the trace for each round.
inline StabilityReport stability_check(const RunTrace& trace, std::size_t player) {
  detail::require_inner(trace, player);
  StabilityReport r;
  r.eta = detail::max_eta(trace, player);
  r.pass_exp = r.pass_linear = true;
  for (std::size_t t = 0; t + 1 < trace.horizon(); ++t) {
    const auto& next = trace.rounds[t + 1][player];
    if (next.restarted) continue;
    const double ratio = max_ratio(trace.rounds[t][player].inner, next.inner);
    r.max_ratio = std::max(r.max_ratio, ratio);
    r.pass_exp = r.pass_exp && ratio <= std::exp(6.0 * next.eta) * (1.0 + kStabilitySlack);
    r.pass_linear = r.pass_linear && ratio <= (1.0 + 7.0 * next.eta) * (1.0 + kStabilitySlack);
  }
  r.exp_bound = std::exp(6.0 * r.eta);
  r.linear_bound = 1.0 + 7.0 * r.eta;
  return r;
}

}  // namespace cedyn

#endif  // CEDYN_DIAGNOSTICS_HPP
