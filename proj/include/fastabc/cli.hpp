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

// The abcboost_train / abcboost_predict command lines.
//
//   abcboost_train -method <name> -data <file> [-J 20] [-v 0.1] [-iter 1000]
//       [-data_max_n_bins 1000] [-lp 2] [-eps 1e-5]
//       [-search 2] [-gap 10] [-warmup 0]
//   abcboost_predict -data <file> -model <file> [-iterations m] [-save_prob]
//
// Output files go to the working directory (or `out_dir`).

#ifndef FASTABC_CLI_HPP_
#define FASTABC_CLI_HPP_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fastabc/boosting.hpp"
#include "fastabc/lp_boost.hpp"

namespace fastabc {

struct TrainOptions {
  Method method = Method::RobustLogit;
  std::filesystem::path data;
  BoostConfig boost;
  LpLossSpec lp;
  AbcConfig abc;
};

/// Throws ConfigError on unknown flags, missing values and flags that do not
/// apply to the chosen method.
TrainOptions parse_train_args(const std::vector<std::string>& args);

/// "{data_basename}_{method}[{s}g{g}]_J{J}_v{v}[_p{p}][_w{w}]"
std::string output_stem(const TrainOptions& options);

struct PredictOptions {
  std::filesystem::path data;
  std::filesystem::path model;
  std::optional<int> iterations;
  bool save_prob = false;
};

PredictOptions parse_predict_args(const std::vector<std::string>& args);

/// Part of a model file name after the training data name, e.g.
/// "robustlogit_J20_v0.1" for "ijcnn1.train.csv_robustlogit_J20_v0.1.model".
std::string model_suffix(const std::filesystem::path& model_path,
                         Method method);

/// Both return the process exit status: 0 on success, 1 on bad input data,
/// 2 on bad usage or configuration. Diagnostics go to `err`.
int run_train(const std::vector<std::string>& args, std::ostream& out,
              std::ostream& err, const std::filesystem::path& out_dir = {});
int run_predict(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err, const std::filesystem::path& out_dir = {});

}  // namespace fastabc

#endif  // FASTABC_CLI_HPP_
