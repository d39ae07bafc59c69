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

#include "fastabc/logit_boost.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace fastabc {

namespace {

double row_loss(const ScoreMatrix& scores, Index i, int label) {
  const double top = scores.row(i).maxCoeff();
  const double log_norm =
      std::log((scores.row(i).array() - top).exp().sum()) + top;
  return log_norm - scores(i, label);
}

}  // namespace

double multiclass_loss(const ScoreMatrix& scores,
                       const std::vector<int>& labels) {
  double loss = 0.0;
  for (Index i = 0; i < scores.rows(); ++i) loss += row_loss(scores, i, labels[i]);
  return loss;
}

std::vector<double> per_class_loss(const ScoreMatrix& scores,
                                   const std::vector<int>& labels, int K) {
  std::vector<double> out(K, 0.0);
  for (Index i = 0; i < scores.rows(); ++i)
    out[labels[i]] += row_loss(scores, i, labels[i]);
  return out;
}

int argmax_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  int best = 0;
  for (int k = 1; k < row.size(); ++k)
    if (row[k] > row[best]) best = k;
  return best;
}

long count_errors(const ScoreMatrix& scores, const std::vector<int>& labels) {
  long errors = 0;
  for (Index i = 0; i < scores.rows(); ++i)
    if (argmax_row(scores.row(i)) != labels[i]) ++errors;
  return errors;
}

ClassState::ClassState(std::vector<int> labels_in, int K_in)
    : K(K_in), labels(std::move(labels_in)) {
  if (K < 2) throw ConfigError("need at least 2 classes");
  const Index n = static_cast<Index>(labels.size());
  F = ScoreMatrix::Zero(n, K);
  P = ScoreMatrix::Constant(n, K, 1.0 / K);
  R = ScoreMatrix::Zero(n, K);
  for (Index i = 0; i < n; ++i) {
    if (labels[i] < 0 || labels[i] >= K)
      throw InputError("label " + std::to_string(labels[i]) + " at row " +
                       std::to_string(i) + " is outside [0, K)");
    R(i, labels[i]) = 1.0;
  }
}

void apply_iteration(const ClassificationModel& model,
                     const BoostIteration& iteration, const BinMatrix& bins,
                     ScoreMatrix& F) {
  const int K = model.n_classes;
  for (int k = 0; k < K; ++k) {
    const auto& tree = iteration.trees[k];
    if (!tree) continue;
    for (Index i = 0; i < bins.rows(); ++i)
      F(i, k) += model.shrinkage * predict_row(*tree, bins.row(i));
  }
  if (iteration.base_class) {
    const int b = *iteration.base_class;
    for (Index i = 0; i < bins.rows(); ++i) {
      double sum = 0.0;
      for (int k = 0; k < K; ++k)
        if (k != b) sum += F(i, k);
      F(i, b) = -sum;
    }
  } else if (K == 2) {
    F.col(0) = -F.col(1);
  }
}

namespace detail {

std::vector<long> check_class_labels(const std::vector<int>& labels, int K,
                                     Index n) {
  if (K < 2) throw ConfigError("classification needs K >= 2");
  if (static_cast<Index>(labels.size()) != n)
    throw InputError("label count does not match rows");
  std::vector<long> counts(K, 0);
  for (int y : labels) {
    if (y < 0 || y >= K)
      throw InputError("class label " + std::to_string(y) +
                       " outside [0, K)");
    ++counts[y];
  }
  for (int k = 0; k < K; ++k)
    if (counts[k] == 0)
      throw ConfigError("class " + std::to_string(k) +
                        " does not occur in the training labels");
  return counts;
}

BoostIteration logit_iteration(const BinnedDataset& data, ClassState& state,
                               const BoostConfig& config, GainMode mode) {
  const int K = state.K;
  const Index n = state.n();
  const double correction = static_cast<double>(K - 1) / K;
  BoostIteration out;
  out.trees.resize(K);

  WorkingSet work{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  // P stays at its iteration-start value until all class trees are built.
  for (int k = (K == 2 ? 1 : 0); k < K; ++k) {
    for (Index i = 0; i < n; ++i) {
      const Derivatives d = logit_derivatives(state, i, k);
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
      return den > 0.0 ? correction * num / den : 0.0;
    });
    for (const LeafRegion& leaf : grown.leaves) {
      const double value = grown.tree.nodes()[leaf.node].value;
      for (Index i : leaf.rows) state.F(i, k) += config.shrinkage * value;
    }
    out.trees[k] = std::move(grown.tree);
  }
  if (K == 2) state.F.col(0) = -state.F.col(1);
  state.refresh_probabilities();
  return out;
}

}  // namespace detail

ClassificationModel train_logit(const BinnedDataset& data,
                                const std::vector<int>& labels, int K,
                                const BoostConfig& config, Method method,
                                const LogSink& log) {
  config.validate();
  if (method != Method::RobustLogit && method != Method::Mart)
    throw ConfigError("train_logit supports robustlogit and mart only");
  detail::check_class_labels(labels, K, data.n());

  ClassificationModel model;
  model.method = method;
  model.n_classes = K;
  model.class_labels.resize(K);
  for (int k = 0; k < K; ++k) model.class_labels[k] = k;
  model.bin_maps = data.maps;
  model.shrinkage = config.shrinkage;
  model.leaves = config.leaves;

  const GainMode mode =
      method == Method::RobustLogit ? GainMode::SecondOrder : GainMode::FirstOrder;
  ClassState state(labels, K);
  for (int m = 1; m <= config.iterations; ++m) {
    const auto started = std::chrono::steady_clock::now();
    model.iterations.push_back(
        detail::logit_iteration(data, state, config, mode));
    if (log) {
      IterationLog rec;
      rec.iteration = m;
      rec.loss = multiclass_loss(state.F, labels);
      rec.errors = count_errors(state.F, labels);
      rec.seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - started)
                        .count();
      log(rec);
    }
  }
  return model;
}

ClassificationModel train_logit(const Eigen::MatrixXd& X,
                                const std::vector<int>& labels, int K,
                                const BoostConfig& config, Method method,
                                const LogSink& log) {
  config.validate();
  return train_logit(fit_dataset(X, config.binner), labels, K, config, method,
                     log);
}

void for_each_stage(const ClassificationModel& model, const BinMatrix& bins,
                    const std::function<void(int, const ScoreMatrix&)>& stage,
                    std::optional<int> iterations) {
  if (bins.cols() != model.n_features())
    throw InputError("feature count mismatch: data has " +
                     std::to_string(bins.cols()) + ", model expects " +
                     std::to_string(model.n_features()));
  const int m_max = iterations ? *iterations : model.n_iterations();
  if (m_max < 0 || m_max > model.n_iterations())
    throw ConfigError("model has " + std::to_string(model.n_iterations()) +
                      " iterations, requested " + std::to_string(m_max));
  ScoreMatrix F = ScoreMatrix::Zero(bins.rows(), model.n_classes);
  for (int m = 0; m < m_max; ++m) {
    apply_iteration(model, model.iterations[m], bins, F);
    if (stage) stage(m + 1, F);
  }
}

ClassPrediction predict(const ClassificationModel& model, const BinMatrix& bins,
                        std::optional<int> iterations) {
  ClassPrediction out;
  out.scores = ScoreMatrix::Zero(bins.rows(), model.n_classes);
  const int last = iterations ? *iterations : model.n_iterations();
  for_each_stage(
      model, bins,
      [&](int m, const ScoreMatrix& F) {
        if (m == last) out.scores = F;
      },
      iterations);
  softmax_rows(out.scores, out.probabilities);
  out.labels.resize(bins.rows());
  for (Index i = 0; i < bins.rows(); ++i)
    out.labels[i] = argmax_row(out.scores.row(i));
  return out;
}

ClassPrediction predict(const ClassificationModel& model,
                        const Eigen::MatrixXd& X,
                        std::optional<int> iterations) {
  return predict(model, apply_bin_maps(X, model.bin_maps).bins, iterations);
}

}  // namespace fastabc
