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

// Multi-class logistic boosting: Robust LogitBoost and MART.
//
// Class probabilities are the row-wise softmax of the score matrix F, and the
// per-row loss is L_i = -sum_k r_{i,k} log p_{i,k}. Each iteration fits one
// tree per class to the residuals r - p with weights p(1 - p); the two methods
// differ only in the split criterion (second-order vs first-order gain). Leaf
// values are the Newton step scaled by (K - 1) / K. For K = 2 a single tree is
// fitted for class 1 and F_0 = -F_1.

#ifndef FASTABC_LOGIT_BOOST_HPP_
#define FASTABC_LOGIT_BOOST_HPP_

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "fastabc/binning.hpp"
#include "fastabc/boosting.hpp"
#include "fastabc/tree.hpp"
#include "fastabc/types.hpp"

namespace fastabc {

/// Row-wise softmax of `scores` into `probs`, shifting each row by its max.
template <typename Derived, typename OutDerived>
void softmax_rows(const Eigen::MatrixBase<Derived>& scores,
                  Eigen::MatrixBase<OutDerived>& probs) {
  using Scalar = typename Derived::Scalar;
  probs.derived().resize(scores.rows(), scores.cols());
  for (Index i = 0; i < scores.rows(); ++i) {
    const Scalar top = scores.row(i).maxCoeff();
    probs.row(i) = (scores.row(i).array() - top).exp().matrix();
    probs.row(i) /= probs.row(i).sum();
  }
}

/// sum_i -log p_{i,y_i}, evaluated as a shifted log-sum-exp so that it stays
/// finite however confident the scores are.
double multiclass_loss(const ScoreMatrix& scores,
                       const std::vector<int>& labels);

/// Per-row loss split by true class: out[k] = sum_{i: y_i = k} L_i.
std::vector<double> per_class_loss(const ScoreMatrix& scores,
                                   const std::vector<int>& labels, int K);

/// Row argmax, ties to the lowest class.
int argmax_row(const Eigen::Ref<const Eigen::RowVectorXd>& row);

/// Number of rows whose argmax differs from the label.
long count_errors(const ScoreMatrix& scores, const std::vector<int>& labels);

/// Scores, probabilities and one-hot labels of a training set.
struct ClassState {
  int K = 0;
  std::vector<int> labels;
  ScoreMatrix F;  // n x K
  ScoreMatrix P;  // n x K
  ScoreMatrix R;  // n x K one-hot

  /// F = 0, P = 1/K. Throws InputError for labels outside [0, K).
  ClassState(std::vector<int> labels, int K);

  Index n() const { return F.rows(); }
  void refresh_probabilities() { softmax_rows(F, P); }
};

/// grad = -(r_{i,k} - p_{i,k}), hess = p_{i,k}(1 - p_{i,k}).
inline Derivatives logit_derivatives(const ClassState& state, Index i, int k) {
  const double p = state.P(i, k);
  return {-(state.R(i, k) - p), p * (1.0 - p)};
}

/// Trees fitted in one boosting iteration. `trees[k]` is empty for classes
/// that get no tree (class 0 for K = 2, the base class in ABC iterations).
struct BoostIteration {
  std::vector<std::optional<RegressionTree>> trees;
  std::optional<int> base_class;

  friend bool operator==(const BoostIteration&, const BoostIteration&) =
      default;
};

struct ClassificationModel {
  Method method = Method::RobustLogit;
  int n_classes = 2;
  std::vector<double> class_labels;  // original label of each class index
  std::vector<FeatureBinMap> bin_maps;
  double shrinkage = 0.1;
  int leaves = 20;
  AbcConfig abc;  // meaningful for ABC methods only
  std::vector<BoostIteration> iterations;

  Index n_features() const { return static_cast<Index>(bin_maps.size()); }
  int n_iterations() const { return static_cast<int>(iterations.size()); }

  friend bool operator==(const ClassificationModel&,
                         const ClassificationModel&) = default;
};

/// Applies one stored iteration to the scores of `bins`.
void apply_iteration(const ClassificationModel& model,
                     const BoostIteration& iteration, const BinMatrix& bins,
                     ScoreMatrix& F);

/// Robust LogitBoost (method RobustLogit) or MART (method Mart). Labels are
/// class indices in [0, K); every class must occur.
ClassificationModel train_logit(const BinnedDataset& data,
                                const std::vector<int>& labels, int K,
                                const BoostConfig& config, Method method,
                                const LogSink& log = {});

ClassificationModel train_logit(const Eigen::MatrixXd& X,
                                const std::vector<int>& labels, int K,
                                const BoostConfig& config, Method method,
                                const LogSink& log = {});

struct ClassPrediction {
  std::vector<int> labels;  // class indices
  ScoreMatrix probabilities;
  ScoreMatrix scores;
};

ClassPrediction predict(const ClassificationModel& model, const BinMatrix& bins,
                        std::optional<int> iterations = std::nullopt);
ClassPrediction predict(const ClassificationModel& model,
                        const Eigen::MatrixXd& X,
                        std::optional<int> iterations = std::nullopt);

/// Calls stage(m, F) after each of the first `iterations` iterations.
void for_each_stage(
    const ClassificationModel& model, const BinMatrix& bins,
    const std::function<void(int, const ScoreMatrix&)>& stage,
    std::optional<int> iterations = std::nullopt);

namespace detail {

/// Validates labels and returns the class counts.
std::vector<long> check_class_labels(const std::vector<int>& labels, int K,
                                     Index n);

/// One Robust LogitBoost / MART iteration on `state` (F and P are updated).
BoostIteration logit_iteration(const BinnedDataset& data, ClassState& state,
                               const BoostConfig& config, GainMode mode);

}  // namespace detail

}  // namespace fastabc

#endif  // FASTABC_LOGIT_BOOST_HPP_
