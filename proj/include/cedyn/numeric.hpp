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

#ifndef CEDYN_NUMERIC_HPP
#define CEDYN_NUMERIC_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace cedyn {

using Vector = std::vector<double>;

/// Probability vector over a finite index set. Entries are nonnegative and sum
/// to one within kSimplexTolerance.
using SimplexVector = Vector;

inline constexpr double kSimplexTolerance = 1e-12;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

inline double inf_norm(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

inline double inf_distance(std::span<const double> a,
                           std::span<const double> b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j)
    m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

inline double total(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v;
  return s;
}

inline bool is_simplex(std::span<const double> p,
                       double tol = kSimplexTolerance) {
  if (p.empty()) return false;
  for (double v : p)
    if (!(v >= 0.0)) return false;
  return std::abs(total(p) - 1.0) <= tol;
}

inline Vector uniform(std::size_t n) {
  return Vector(n, 1.0 / static_cast<double>(n));
}

/// Normalized exp(logits), shifted by the max logit first.
inline Vector softmax(std::span<const double> logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  Vector out(logits.size());
  double s = 0.0;
  for (std::size_t j = 0; j < logits.size(); ++j) {
    out[j] = std::exp(logits[j] - top);
    s += out[j];
  }
  for (double& v : out) v /= s;
  return out;
}

/// max_j max(a_j / b_j, b_j / a_j) for strictly positive vectors.
inline double max_ratio(std::span<const double> a, std::span<const double> b) {
  double m = 1.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] <= 0.0 || b[j] <= 0.0)
      return std::numeric_limits<double>::infinity();
    m = std::max({m, a[j] / b[j], b[j] / a[j]});
  }
  return m;
}

/// Integer power for small exponents.
inline std::uint64_t ipow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

}  // namespace cedyn

#endif  // CEDYN_NUMERIC_HPP
