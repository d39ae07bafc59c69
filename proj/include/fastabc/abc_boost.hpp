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

// Adaptive base class (ABC) boosting with the fast search strategy.
//
// Under the sum-to-zero constraint F_b = -sum_{k != b} F_k one class b is
// eliminated and the remaining K - 1 scores get the derivatives
//
//   dL/dF_k   = (r_b - p_b) - (r_k - p_k)
//   d2L/dF_k2 = p_b(1 - p_b) + p_k(1 - p_k) + 2 p_b p_k.
//
// Each search iteration tries every candidate base class, builds K - 1 trees
// per candidate, and keeps the candidate with the smallest training loss.
// Candidates are the `search` classes with the largest running per-class loss;
// between searches (every gap + 1 iterations) the previous base is reused.
// The first `warmup` iterations are plain Robust LogitBoost (or MART).

#ifndef FASTABC_ABC_BOOST_HPP_
#define FASTABC_ABC_BOOST_HPP_

#include <optional>
#include <span>
#include <vector>

#include "fastabc/boosting.hpp"
#include "fastabc/logit_boost.hpp"

namespace fastabc {

/// Derivatives of L_i in F_{i,k} with base class b eliminated. Throws
/// std::invalid_argument if k == b.
Derivatives abc_derivatives(const ClassState& state, Index i, int k, int b);

/// Base-class candidates for iteration m (1-based). On search iterations,
/// (m - 1) mod (gap + 1) == 0, or when there is no previous base, returns the
/// `search` classes with the largest running loss (ties to the lower class);
/// otherwise returns {prev_base}.
std::vector<int> select_search_classes(std::span<const double> running_loss,
                                       int search, int m, int gap,
                                       std::optional<int> prev_base);

/// Fast ABC-RobustLogitBoost (AbcRobustLogit) or ABC-MART (AbcMart).
/// Requires K >= 3.
ClassificationModel train_abc(const BinnedDataset& data,
                              const std::vector<int>& labels, int K,
                              const BoostConfig& config, const AbcConfig& abc,
                              Method method = Method::AbcRobustLogit,
                              const LogSink& log = {});

ClassificationModel train_abc(const Eigen::MatrixXd& X,
                              const std::vector<int>& labels, int K,
                              const BoostConfig& config, const AbcConfig& abc,
                              Method method = Method::AbcRobustLogit,
                              const LogSink& log = {});

}  // namespace fastabc

#endif  // FASTABC_ABC_BOOST_HPP_
