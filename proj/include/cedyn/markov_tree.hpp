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

#ifndef CEDYN_MARKOV_TREE_HPP
#define CEDYN_MARKOV_TREE_HPP

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cedyn/error.hpp"
#include "cedyn/numeric.hpp"

namespace cedyn {

inline constexpr int kNoParent = -1;
inline constexpr std::size_t kMaxTreeNodes = 7;

/// Directed tree rooted at `root`: every other node v has the single outgoing
/// edge (v, parents[v]); parents[root] == kNoParent.
struct Arborescence {
  std::size_t root = 0;
  std::vector<int> parents;

  std::size_t num_nodes() const { return parents.size(); }

  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    e.reserve(parents.size() - 1);
    for (std::size_t v = 0; v < parents.size(); ++v)
      if (v != root) e.emplace_back(v, static_cast<std::size_t>(parents[v]));
    return e;
  }

  auto operator<=>(const Arborescence&) const = default;
};

/// Checks the arborescence definition by following parent pointers: every
/// node must reach `root` in fewer than n hops.
inline bool is_arborescence(std::span<const int> parents, std::size_t root) {
  const std::size_t n = parents.size();
  if (root >= n || parents[root] != kNoParent) return false;
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t cur = v;
    std::size_t hops = 0;
    while (cur != root) {
      const int p = parents[cur];
      if (p < 0 || static_cast<std::size_t>(p) >= n ||
          static_cast<std::size_t>(p) == cur)
        return false;
      cur = static_cast<std::size_t>(p);
      if (++hops >= n) return false;
    }
  }
  return true;
}

inline std::size_t arborescence_count(std::size_t n) {
  return n < 2 ? 1 : static_cast<std::size_t>(ipow(n, static_cast<unsigned>(n - 2)));
}

namespace detail {

inline void check_tree_size(std::size_t n) {
  if (n < 2 || n > kMaxTreeNodes)
    throw ValidationError("arborescence enumeration supports 2 <= n <= " +
                          std::to_string(kMaxTreeNodes) + ", got " +
                          std::to_string(n));
}

// Marks nodes known to drain into the root; a walk that revisits a node of
// the current path has found a cycle.
inline bool drains_to_root(const std::vector<int>& parents, std::size_t root) {
  const std::size_t n = parents.size();
  std::vector<unsigned char> state(n, 0);  // 0 new, 1 on path, 2 reaches root
  state[root] = 2;
  std::vector<std::size_t> path;
  for (std::size_t v = 0; v < n; ++v) {
    path.clear();
    std::size_t cur = v;
    while (state[cur] == 0) {
      state[cur] = 1;
      path.push_back(cur);
      cur = static_cast<std::size_t>(parents[cur]);
    }
    if (state[cur] == 1) return false;
    for (std::size_t u : path) state[u] = 2;
  }
  return true;
}

}  // namespace detail

/// All n^(n-2) arborescences rooted at `root`, in lexicographic order of the
/// parent array. Generated by filtering every parent array in [n]^(n-1).
inline std::vector<Arborescence> enumerate_arborescences(std::size_t n,
                                                         std::size_t root) {
  detail::check_tree_size(n);
  if (root >= n)
    throw ValidationError("root " + std::to_string(root) + " out of range for " +
                          std::to_string(n) + " nodes");
  std::vector<std::size_t> free_nodes;
  for (std::size_t v = 0; v < n; ++v)
    if (v != root) free_nodes.push_back(v);

  std::vector<Arborescence> trees;
  trees.reserve(arborescence_count(n));
  std::vector<int> parents(n, 0);
  parents[root] = kNoParent;
  while (true) {
    bool self_loop = false;
    for (std::size_t v : free_nodes)
      if (parents[v] == static_cast<int>(v)) self_loop = true;
    if (!self_loop && detail::drains_to_root(parents, root))
      trees.push_back(Arborescence{root, parents});
    // Odometer, the lowest free node is most significant.
    std::size_t k = free_nodes.size();
    while (k > 0) {
      const std::size_t v = free_nodes[k - 1];
      if (++parents[v] < static_cast<int>(n)) break;
      parents[v] = 0;
      --k;
    }
    if (k == 0) break;
  }
  return trees;
}

/// Every arborescence on n nodes: roots in increasing order, each block in
/// enumerate_arborescences order. Cached per n; the returned reference stays
/// valid for the life of the program.
inline const std::vector<Arborescence>& all_arborescences(std::size_t n) {
  detail::check_tree_size(n);
  static std::array<std::vector<Arborescence>, kMaxTreeNodes + 1> cache;
  static std::array<std::once_flag, kMaxTreeNodes + 1> once;
  std::call_once(once[n], [n] {
    for (std::size_t r = 0; r < n; ++r) {
      auto block = enumerate_arborescences(n, r);
      cache[n].insert(cache[n].end(), block.begin(), block.end());
    }
  });
  return cache[n];
}

/// Row-stochastic n x n matrix, row-major.
class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  TransitionMatrix(std::size_t n, Vector entries)
      : n_(n), data_(std::move(entries)) {
    if (n == 0) throw ValidationError("transition matrix must be non-empty");
    if (data_.size() != n * n)
      throw ValidationError("transition matrix needs " + std::to_string(n * n) +
                            " entries, got " + std::to_string(data_.size()));
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double v = (*this)(i, j);
        if (!(v >= 0.0) || !std::isfinite(v))
          throw ValidationError("transition matrix entry (" + std::to_string(i) +
                                "," + std::to_string(j) + ") is negative or "
                                "not finite");
        s += v;
      }
      if (std::abs(s - 1.0) > kSimplexTolerance)
        throw ValidationError("row " + std::to_string(i) + " sums to " +
                              std::to_string(s) + ", not 1");
    }
  }

  static TransitionMatrix from_rows(const std::vector<Vector>& rows) {
    Vector flat;
    for (const auto& r : rows) {
      if (r.size() != rows.size())
        throw ValidationError("transition matrix must be square");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return TransitionMatrix(rows.size(), std::move(flat));
  }

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * n_, n_};
  }
  const Vector& data() const { return data_; }

  bool strictly_positive() const {
    for (double v : data_)
      if (!(v > 0.0)) return false;
    return true;
  }

 private:
  std::size_t n_ = 0;
  Vector data_;
};

/// ||Q^T pi - pi||_inf.
inline double stationary_residual(const TransitionMatrix& q,
                                  std::span<const double> pi) {
  const std::size_t n = q.size();
  double r = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += q(i, j) * pi[i];
    r = std::max(r, std::abs(s - pi[j]));
  }
  return r;
}

namespace detail {

inline void check_tree_theorem_input(const TransitionMatrix& q) {
  check_tree_size(q.size());
  if (!q.strictly_positive())
    throw ValidationError("tree-theorem solver needs strictly positive entries");
}

}  // namespace detail

/// Unnormalized tree weights: Sigma_j = sum over trees rooted at j of the
/// product of Q[a,b] along the tree's edges (a,b).
inline Vector tree_weights(const TransitionMatrix& q) {
  detail::check_tree_theorem_input(q);
  const std::size_t n = q.size();
  Vector sigma(n, 0.0);
  for (const Arborescence& tree : all_arborescences(n)) {
    double w = 1.0;
    for (std::size_t v = 0; v < n; ++v)
      if (v != tree.root) w *= q(v, static_cast<std::size_t>(tree.parents[v]));
    sigma[tree.root] += w;
  }
  return sigma;
}

/// Stationary distribution pi[j] = Sigma_j / sum_k Sigma_k (n <= 7).
inline SimplexVector tree_theorem_stationary(const TransitionMatrix& q) {
  Vector sigma = tree_weights(q);
  const double s = total(sigma);
  for (double& v : sigma) v /= s;
  return sigma;
}

/// Log-domain form of the tree theorem: Sigma_j built from
/// exp(sum of log Q[a,b] over tree edges), shifted by the largest exponent.
/// Cross-check only, limited to n <= 5.
inline SimplexVector tree_theorem_stationary_log(const TransitionMatrix& q) {
  detail::check_tree_theorem_input(q);
  const std::size_t n = q.size();
  if (n > 5) throw ValidationError("log-domain tree theorem is limited to n <= 5");
  const auto& trees = all_arborescences(n);
  Vector exponents(trees.size());
  for (std::size_t t = 0; t < trees.size(); ++t) {
    double e = 0.0;
    for (std::size_t v = 0; v < n; ++v)
      if (v != trees[t].root)
        e += std::log(q(v, static_cast<std::size_t>(trees[t].parents[v])));
    exponents[t] = e;
  }
  const Vector weights = softmax(exponents);
  Vector pi(n, 0.0);
  for (std::size_t t = 0; t < trees.size(); ++t) pi[trees[t].root] += weights[t];
  return pi;
}

inline constexpr double kStationaryResidualTolerance = 1e-10;

/// Power iteration pi <- Q^T pi from the uniform vector until successive
/// iterates differ by at most `tol` in the sup norm.
inline SimplexVector power_iteration_stationary(const TransitionMatrix& q,
                                                double tol = 1e-13,
                                                std::size_t max_iterations = 1000000) {
  const std::size_t n = q.size();
  Vector pi = uniform(n), next(n);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) next[j] += q(i, j) * pi[i];
    const double s = total(next);
    for (double& v : next) v /= s;
    const double delta = inf_distance(next, pi);
    pi.swap(next);
    if (delta <= tol) break;
  }
  return pi;
}

namespace detail {

// Accepts zero entries: iterates of the learners are positive in exact
// arithmetic but can underflow to 0 after long runs with a large rate.
inline SimplexVector solve_stationary_nonnegative(const TransitionMatrix& q) {
  const std::size_t n = q.size();
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd a(dim, dim);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          q(j, i) - (i == j ? 1.0 : 0.0);
  a.row(dim - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dim);
  b(dim - 1) = 1.0;
  const Eigen::VectorXd sol = a.partialPivLu().solve(b);

  Vector pi(n);
  bool finite = true;
  for (std::size_t j = 0; j < n; ++j) {
    pi[j] = std::max(0.0, sol(static_cast<Eigen::Index>(j)));
    finite = finite && std::isfinite(pi[j]);
  }
  if (finite) {
    const double s = total(pi);
    for (double& v : pi) v /= s;
    if (stationary_residual(q, pi) <= kStationaryResidualTolerance) return pi;
  }
  pi = power_iteration_stationary(q);
  const double residual = stationary_residual(q, pi);
  if (!(residual <= kStationaryResidualTolerance))
    throw NumericalError("stationary distribution did not converge", residual);
  return pi;
}

}  // namespace detail

/// Stationary distribution by LU with partial pivoting on (Q^T - I) with the
/// last equation replaced by sum(pi) = 1. Falls back to power iteration if
/// the residual ||Q^T pi - pi||_inf exceeds 1e-10; throws NumericalError if
/// both fail.
inline SimplexVector solve_stationary(const TransitionMatrix& q) {
  if (!q.strictly_positive())
    throw ValidationError("stationary solver needs strictly positive entries");
  return detail::solve_stationary_nonnegative(q);
}

}  // namespace cedyn

#endif  // CEDYN_MARKOV_TREE_HPP
