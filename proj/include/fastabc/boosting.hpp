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

#ifndef FASTABC_BOOSTING_HPP_
#define FASTABC_BOOSTING_HPP_

#include <functional>
#include <optional>
#include <string_view>

#include "fastabc/binning.hpp"

namespace fastabc {

enum class Method { Regression, RobustLogit, Mart, AbcRobustLogit, AbcMart };

std::string_view method_name(Method method);
/// Throws ConfigError for an unknown name.
Method parse_method(std::string_view name);
bool is_abc(Method method);

/// Parameters shared by every boosting method.
struct BoostConfig {
  int leaves = 20;         // J
  double shrinkage = 0.1;  // nu
  int iterations = 1000;   // M
  BinnerConfig binner;

  void validate() const;
};

/// Fast ABC search parameters: base-class candidates are the `search` classes
/// with the largest running loss, re-chosen every `gap + 1` iterations, after
/// `warmup` plain boosting iterations.
struct AbcConfig {
  int search = 2;
  int gap = 10;
  int warmup = 0;

  /// Throws ConfigError unless 1 <= search <= n_classes, gap >= 0, warmup >= 0.
  void validate(int n_classes) const;

  friend bool operator==(const AbcConfig&, const AbcConfig&) = default;
};

/// One trainlog/testlog row.
struct IterationLog {
  int iteration = 0;
  double loss = 0.0;
  std::optional<long> errors;      // classification only
  double seconds = 0.0;
  std::optional<int> base_class;   // ABC only; nullopt during warm-up
  std::optional<double> candidate_loss;  // ABC only, loss of the winner
};

using LogSink = std::function<void(const IterationLog&)>;

}  // namespace fastabc

#endif  // FASTABC_BOOSTING_HPP_
