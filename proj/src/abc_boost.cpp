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

#include "fastabc/abc_boost.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fastabc {

namespace {

struct Candidate {
  int base = 0;
  ScoreMatrix G;
  std::vector<std::optional<RegressionTree>> trees;
  double loss = 0.0;
};

Candidate evaluate_candidate(const BinnedDataset& data, const ClassState& state,
                             int b, const BoostConfig& config, GainMode mode) {
  const int K = state.K;
  const Index n = state.n();
  Candidate out;
  out.base = b;
  out.G = state.F;
  out.trees.resize(K);

  WorkingSet work{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int k = 0; k < K; ++k) {
    if (k == b) continue;
    for (Index i = 0; i < n; ++i) {
      const Derivatives d = abc_derivatives(state, i, k, b);
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
      return den > 0.0 ? num / den : 0.0;
    });
    for (const LeafRegion& leaf : grown.leaves) {
      const double value = grown.tree.nodes()[leaf.node].value;
      for (Index i : leaf.rows) out.G(i, k) += config.shrinkage * value;
    }
    out.trees[k] = std::move(grown.tree);
  }
  for (Index i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int k = 0; k < K; ++k)
      if (k != b) sum += out.G(i, k);
    out.G(i, b) = -sum;
  }
  out.loss = multiclass_loss(out.G, state.labels);
  return out;
}

}  // namespace

Derivatives abc_derivatives(const ClassState& state, Index i, int k, int b) {
  if (k == b)
    throw std::invalid_argument("ABC derivatives need k != base class");
  const double pb = state.P(i, b);
  const double pk = state.P(i, k);
  const double grad = (state.R(i, b) - pb) - (state.R(i, k) - pk);
  const double hess = pb * (1.0 - pb) + pk * (1.0 - pk) + 2.0 * pb * pk;
  return {grad, hess};
}

std::vector<int> select_search_classes(std::span<const double> running_loss,
                                       int search, int m, int gap,
                                       std::optional<int> prev_base) {
  const int K = static_cast<int>(running_loss.size());
  if (prev_base && (m - 1) % (gap + 1) != 0) return {*prev_base};
  std::vector<int> order(K);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return running_loss[a] > running_loss[b];
  });
  order.resize(std::min(search, K));
  return order;
}

ClassificationModel train_abc(const BinnedDataset& data,
                              const std::vector<int>& labels, int K,
                              const BoostConfig& config, const AbcConfig& abc,
                              Method method, const LogSink& log) {
  config.validate();
  if (!is_abc(method))
    throw ConfigError("train_abc supports abcrobustlogit and abcmart only");
  if (K < 3)
    throw ConfigError(
        "ABC boosting needs at least 3 classes; use robustlogit for K = 2");
  abc.validate(K);
  const std::vector<long> counts =
      detail::check_class_labels(labels, K, data.n());

  ClassificationModel model;
  model.method = method;
  model.n_classes = K;
  model.class_labels.resize(K);
  for (int k = 0; k < K; ++k) model.class_labels[k] = k;
  model.bin_maps = data.maps;
  model.shrinkage = config.shrinkage;
  model.leaves = config.leaves;
  model.abc = abc;

  const GainMode mode = method == Method::AbcRobustLogit
                            ? GainMode::SecondOrder
                            : GainMode::FirstOrder;
  ClassState state(labels, K);
  std::vector<double> running_loss(counts.begin(), counts.end());
  std::optional<int> prev_base;

  for (int m = 1; m <= config.iterations; ++m) {
    const auto started = std::chrono::steady_clock::now();
    IterationLog rec;
    rec.iteration = m;
    if (m <= abc.warmup) {
      model.iterations.push_back(
          detail::logit_iteration(data, state, config, mode));
      running_loss = per_class_loss(state.F, labels, K);
    } else {
      const std::vector<int> candidates =
          select_search_classes(running_loss, abc.search, m, abc.gap, prev_base);
      std::optional<Candidate> best;
      for (int b : candidates) {
        Candidate cand = evaluate_candidate(data, state, b, config, mode);
        if (!best || cand.loss < best->loss ||
            (cand.loss == best->loss && cand.base < best->base))
          best = std::move(cand);
      }
      state.F = std::move(best->G);
      state.refresh_probabilities();
      running_loss = per_class_loss(state.F, labels, K);
      prev_base = best->base;
      model.iterations.push_back(
          BoostIteration{std::move(best->trees), best->base});
      rec.base_class = best->base;
      rec.candidate_loss = best->loss;
    }
    if (log) {
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

ClassificationModel train_abc(const Eigen::MatrixXd& X,
                              const std::vector<int>& labels, int K,
                              const BoostConfig& config, const AbcConfig& abc,
                              Method method, const LogSink& log) {
  config.validate();
  return train_abc(fit_dataset(X, config.binner), labels, K, config, abc,
                   method, log);
}

}  // namespace fastabc
