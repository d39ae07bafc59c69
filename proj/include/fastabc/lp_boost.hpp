// Copyright 2026 The FastABC Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// L_p regression boosting, loss (1/n) sum |y_i - F_i|^p for p >= 1.
//
// For p >= 2 trees use the second-order gain and Newton leaf values
// sum(-L') / sum(L''). For 1 <= p < 2 the hessian is unusable near y = F, so
// trees use the first-order gain and leaves sum(-L') / (p * |leaf|).
// Training stops early once the loss falls below
// eps^(p/2) * (1/n) sum |y_i|^p.

#ifndef FASTABC_LP_BOOST_HPP_
#define FASTABC_LP_BOOST_HPP_

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "fastabc/binning.hpp"
#include "fastabc/boosting.hpp"
#include "fastabc/tree.hpp"
#include "fastabc/types.hpp"

namespace fastabc {

struct LpLossSpec {
  double p = 2.0;
  double epsilon = 1e-5;

  void validate() const;
  GainMode gain_mode() const {
    return p >= 2.0 ? GainMode::SecondOrder : GainMode::FirstOrder;
  }
  friend bool operator==(const LpLossSpec&, const LpLossSpec&) = default;
};

/// grad = -p |y-F|^(p-1) sign(y-F). hess = p(p-1)|y-F|^(p-2) in SecondOrder
/// mode; in FirstOrder mode hess is the constant 1. At y == F the gradient is
/// 0. Throws ConfigError for p < 1 or for SecondOrder with p < 2.
template <typename Scalar>
DerivativePair<Scalar> lp_derivatives(Scalar y, Scalar F, Scalar p,
                                      GainMode mode) {
  using std::abs;
  using std::pow;
  if (!(p >= Scalar(1))) throw ConfigError("L_p loss needs p >= 1");
  if (mode == GainMode::SecondOrder && p < Scalar(2))
    throw ConfigError("second-order L_p derivatives need p >= 2");
  const Scalar diff = y - F;
  const Scalar mag = abs(diff);
  DerivativePair<Scalar> d{Scalar(0), Scalar(1)};
  if (diff != Scalar(0)) {
    const Scalar sign = diff > Scalar(0) ? Scalar(1) : Scalar(-1);
    d.grad = p == Scalar(2) ? Scalar(-2) * diff
                            : -p * pow(mag, p - Scalar(1)) * sign;
  }
  if (mode == GainMode::SecondOrder) {
    d.hess = p == Scalar(2) ? Scalar(2)
                            : p * (p - Scalar(1)) * pow(mag, p - Scalar(2));
  }
  return d;
}

template <typename Scalar>
DerivativePair<Scalar> lp_derivatives(Scalar y, Scalar F, Scalar p) {
  return lp_derivatives(y, F, p,
                        p >= Scalar(2) ? GainMode::SecondOrder
                                       : GainMode::FirstOrder);
}

/// (1/n) sum |y_i - F_i|^p.
double lp_loss(const Eigen::Ref<const Eigen::VectorXd>& y,
               const Eigen::Ref<const Eigen::VectorXd>& F, double p);

struct RegressionModel {
  std::vector<FeatureBinMap> bin_maps;
  std::vector<RegressionTree> trees;  // f_1 .. f_M
  double shrinkage = 0.1;
  int leaves = 20;
  LpLossSpec loss;

  Index n_features() const { return static_cast<Index>(bin_maps.size()); }
  int iterations() const { return static_cast<int>(trees.size()); }

  friend bool operator==(const RegressionModel&, const RegressionModel&) =
      default;
};

RegressionModel train_regression(const BinnedDataset& data,
                                 const Eigen::VectorXd& y,
                                 const BoostConfig& config,
                                 const LpLossSpec& loss,
                                 const LogSink& log = {});

RegressionModel train_regression(const Eigen::MatrixXd& X,
                                 const Eigen::VectorXd& y,
                                 const BoostConfig& config,
                                 const LpLossSpec& loss,
                                 const LogSink& log = {});

/// F after the first `iterations` trees (all trees when nullopt).
Eigen::VectorXd predict(const RegressionModel& model, const BinMatrix& bins,
                        std::optional<int> iterations = std::nullopt);
Eigen::VectorXd predict(const RegressionModel& model, const Eigen::MatrixXd& X,
                        std::optional<int> iterations = std::nullopt);

/// Calls stage(m, F) after each of the first `iterations` trees.
void for_each_stage(
    const RegressionModel& model, const BinMatrix& bins,
    const std::function<void(int, const Eigen::VectorXd&)>& stage,
    std::optional<int> iterations = std::nullopt);

}  // namespace fastabc

#endif  // FASTABC_LP_BOOST_HPP_
