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

#ifndef CEDYN_OMWU_HPP
#define CEDYN_OMWU_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include "cedyn/error.hpp"
#include "cedyn/numeric.hpp"

namespace cedyn {

/// Whether the last observed loss is counted a second time as a prediction.
enum class Prediction { optimistic, none };

/// Optimistic multiplicative weights over {0, ..., n-1}.
///
/// The iterate after t observations is
///   x^(t+1) ∝ exp(-eta * (G^(t) + l^(t))),  G^(t) = l^(1) + ... + l^(t),
/// which unrolls the ratio form x^(t+1) ∝ x^(t) exp(-eta (2 l^(t) - l^(t-1)))
/// with l^(0) = 0. The iterate is recomputed from cumulative losses in
/// shifted log-space each round. With Prediction::none the update reduces to
/// plain multiplicative weights, x^(t+1) ∝ exp(-eta G^(t)).
class Omwu {
 public:
  Omwu(std::size_t dimension, double eta,
       Prediction prediction = Prediction::optimistic)
      : eta_(eta),
        prediction_(prediction),
        cumulative_(dimension, 0.0),
        last_(dimension, 0.0) {
    if (dimension == 0) throw ValidationError("OMWU dimension must be positive");
    if (!(eta > 0.0) || !std::isfinite(eta))
      throw ValidationError("learning rate must be positive and finite, got " +
                            std::to_string(eta));
  }

  SimplexVector next_strategy() const {
    if (step_ == 0) return uniform(dimension());
    const double w = prediction_ == Prediction::optimistic ? 1.0 : 0.0;
    Vector logits(dimension());
    for (std::size_t j = 0; j < logits.size(); ++j)
      logits[j] = -eta_ * (cumulative_[j] + w * last_[j]);
    return softmax(logits);
  }

  void observe_loss(std::span<const double> loss) {
    if (loss.size() != dimension())
      throw ValidationError("loss has dimension " + std::to_string(loss.size()) +
                            ", expected " + std::to_string(dimension()));
    for (double v : loss)
      if (!std::isfinite(v)) throw ValidationError("loss entry is not finite");
    for (std::size_t j = 0; j < loss.size(); ++j) {
      cumulative_[j] += loss[j];
      last_[j] = loss[j];
    }
    ++step_;
  }

  std::size_t dimension() const { return cumulative_.size(); }
  double eta() const { return eta_; }
  Prediction prediction() const { return prediction_; }
  std::size_t step() const { return step_; }
  const Vector& cumulative_loss() const { return cumulative_; }
  const Vector& last_loss() const { return last_; }

 private:
  double eta_;
  Prediction prediction_;
  Vector cumulative_;
  Vector last_;
  std::size_t step_ = 0;
};

}  // namespace cedyn

#endif  // CEDYN_OMWU_HPP
