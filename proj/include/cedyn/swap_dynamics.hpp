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

#ifndef CEDYN_SWAP_DYNAMICS_HPP
#define CEDYN_SWAP_DYNAMICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cedyn/error.hpp"
#include "cedyn/internal_dynamics.hpp"
#include "cedyn/markov_tree.hpp"
#include "cedyn/numeric.hpp"
#include "cedyn/omwu.hpp"

namespace cedyn {

/// |sum_g <Q[g,:], x[g] l> - <x, l>|; zero whenever x = Q^T x.
inline double loss_decomposition_gap(const TransitionMatrix& q,
                                     std::span<const double> x,
                                     std::span<const double> ell) {
  double split = 0.0;
  for (std::size_t g = 0; g < q.size(); ++g) split += x[g] * dot(q.row(g), ell);
  return std::abs(split - dot(x, ell));
}

/// Swap-regret minimizer: n OMWU copies, copy g producing row g of Q and
/// observing the scaled loss x[g] * l. Plays the stationary distribution of Q.
class BmOmwu {
 public:
  BmOmwu(std::size_t n, double eta,
         Prediction prediction = Prediction::optimistic)
      : n_(n) {
    if (n < 2) throw ValidationError("BM-OMWU needs at least 2 actions");
    copies_.reserve(n);
    for (std::size_t g = 0; g < n; ++g) copies_.emplace_back(n, eta, prediction);
  }

  const SimplexVector& next_strategy() {
    Vector rows;
    rows.reserve(n_ * n_);
    for (const Omwu& copy : copies_) {
      const SimplexVector q = copy.next_strategy();
      rows.insert(rows.end(), q.begin(), q.end());
    }
    matrix_ = TransitionMatrix(n_, std::move(rows));
    strategy_ = detail::solve_stationary_nonnegative(matrix_);
    return *strategy_;
  }

  /// Copy g observes x[g] * l. Requires l in [0,1]^n.
  void observe_loss(std::span<const double> ell) {
    if (!strategy_)
      throw ValidationError("observe_loss called before next_strategy");
    detail::check_loss_range(ell, n_, 0.0, 1.0);
    decomposition_gap_ = loss_decomposition_gap(matrix_, *strategy_, ell);
    scaled_losses_.assign(n_ * n_, 0.0);
    Vector scaled(n_);
    for (std::size_t g = 0; g < n_; ++g) {
      for (std::size_t k = 0; k < n_; ++k) scaled[k] = (*strategy_)[g] * ell[k];
      copies_[g].observe_loss(scaled);
      std::copy(scaled.begin(), scaled.end(), scaled_losses_.begin() + static_cast<std::ptrdiff_t>(g * n_));
    }
    strategy_.reset();
  }

  std::size_t num_actions() const { return n_; }
  double eta() const { return copies_.front().eta(); }
  const std::vector<Omwu>& copies() const { return copies_; }
  const TransitionMatrix& matrix() const { return matrix_; }
  /// Row-major concatenation of the scaled losses fed to the copies.
  const Vector& last_scaled_losses() const { return scaled_losses_; }
  double last_decomposition_gap() const { return decomposition_gap_; }

 private:
  std::size_t n_;
  std::vector<Omwu> copies_;
  TransitionMatrix matrix_;
  std::optional<SimplexVector> strategy_;
  Vector scaled_losses_;
  double decomposition_gap_ = 0.0;
};

}  // namespace cedyn

#endif  // CEDYN_SWAP_DYNAMICS_HPP
