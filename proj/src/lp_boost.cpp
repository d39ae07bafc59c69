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

#include "fastabc/lp_boost.hpp"

#include <chrono>
#include <string>

namespace fastabc {

void LpLossSpec::validate() const {
  if (!(p >= 1.0) || !std::isfinite(p)) throw ConfigError("p must be >= 1");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
}

double lp_loss(const Eigen::Ref<const Eigen::VectorXd>& y,
               const Eigen::Ref<const Eigen::VectorXd>& F, double p) {
  if (y.size() == 0) return 0.0;
  if (p == 2.0) return (y - F).squaredNorm() / static_cast<double>(y.size());
  return (y - F).array().abs().pow(p).sum() / static_cast<double>(y.size());
}

RegressionModel train_regression(const BinnedDataset& data,
                                 const Eigen::VectorXd& y,
                                 const BoostConfig& config,
                                 const LpLossSpec& loss, const LogSink& log) {
  config.validate();
  loss.validate();
  const Index n = data.n();
  if (n < 2) throw ConfigError("regression needs at least 2 rows");
  if (y.size() != n) throw InputError("label count does not match rows");
  if (!y.allFinite()) throw InputError("non-finite regression target");

  RegressionModel model;
  model.bin_maps = data.maps;
  model.shrinkage = config.shrinkage;
  model.leaves = config.leaves;
  model.loss = loss;

  const double p = loss.p;
  const GainMode mode = loss.gain_mode();
  const double stop_below =
      std::pow(loss.epsilon, p / 2.0) * lp_loss(y, Eigen::VectorXd::Zero(n), p);

  Eigen::VectorXd F = Eigen::VectorXd::Zero(n);
  WorkingSet work{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int m = 1; m <= config.iterations; ++m) {
    const auto started = std::chrono::steady_clock::now();
    for (Index i = 0; i < n; ++i) {
      const Derivatives d = lp_derivatives(y[i], F[i], p, mode);
      work.grad[i] = d.grad;
      work.hess[i] = d.hess;
    }

    GrownTree grown = grow(data, work, config.leaves, mode);
    assign_leaf_values(grown, [&](std::span<const Index> rows) {
      double num = 0.0;
      double den = 0.0;
      for (Index i : rows) {
        num -= work.grad[i];
        den += work.hess[i];
      }
      if (mode == GainMode::FirstOrder)
        den = p * static_cast<double>(rows.size());
      return den > 0.0 ? num / den : 0.0;
    });
    for (const LeafRegion& leaf : grown.leaves) {
      const double step = config.shrinkage * grown.tree.nodes()[leaf.node].value;
      for (Index i : leaf.rows) F[i] += step;
    }
    model.trees.push_back(std::move(grown.tree));

    const double train_loss = lp_loss(y, F, p);
    if (log) {
      IterationLog rec;
      rec.iteration = m;
      rec.loss = train_loss;
      rec.seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - started)
                        .count();
      log(rec);
    }
    if (train_loss < stop_below) break;
  }
  return model;
}

RegressionModel train_regression(const Eigen::MatrixXd& X,
                                 const Eigen::VectorXd& y,
                                 const BoostConfig& config,
                                 const LpLossSpec& loss, const LogSink& log) {
  config.validate();
  return train_regression(fit_dataset(X, config.binner), y, config, loss, log);
}

void for_each_stage(
    const RegressionModel& model, const BinMatrix& bins,
    const std::function<void(int, const Eigen::VectorXd&)>& stage,
    std::optional<int> iterations) {
  if (bins.cols() != model.n_features())
    throw InputError("feature count mismatch: data has " +
                     std::to_string(bins.cols()) + ", model expects " +
                     std::to_string(model.n_features()));
  const int m_max = iterations ? *iterations : model.iterations();
  if (m_max < 0 || m_max > model.iterations())
    throw ConfigError("model has " + std::to_string(model.iterations()) +
                      " iterations, requested " + std::to_string(m_max));
  Eigen::VectorXd F = Eigen::VectorXd::Zero(bins.rows());
  for (int m = 0; m < m_max; ++m) {
    const RegressionTree& tree = model.trees[m];
    for (Index i = 0; i < bins.rows(); ++i)
      F[i] += model.shrinkage * predict_row(tree, bins.row(i));
    if (stage) stage(m + 1, F);
  }
}

Eigen::VectorXd predict(const RegressionModel& model, const BinMatrix& bins,
                        std::optional<int> iterations) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(bins.rows());
  const int last = iterations ? *iterations : model.iterations();
  for_each_stage(
      model, bins,
      [&](int m, const Eigen::VectorXd& F) {
        if (m == last) out = F;
      },
      iterations);
  return out;
}

Eigen::VectorXd predict(const RegressionModel& model, const Eigen::MatrixXd& X,
                        std::optional<int> iterations) {
  return predict(model, apply_bin_maps(X, model.bin_maps).bins, iterations);
}

}  // namespace fastabc
