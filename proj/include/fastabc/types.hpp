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

#ifndef FASTABC_TYPES_HPP_
#define FASTABC_TYPES_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace fastabc {

using Index = Eigen::Index;
using BinIndex = std::uint32_t;

// n x d, column-major so that a feature is a contiguous column.
using BinMatrix = Eigen::Matrix<BinIndex, Eigen::Dynamic, Eigen::Dynamic>;

// n x K function values F_{i,k} (or probabilities p_{i,k}).
using ScoreMatrix = Eigen::MatrixXd;

/// Malformed or unusable input data (non-finite values, ragged files, ...).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid training or prediction parameters.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what)
      : std::invalid_argument(what) {}
};

/// First and second derivative of a per-row loss with respect to F.
template <typename Scalar>
struct DerivativePair {
  Scalar grad;
  Scalar hess;
};

using Derivatives = DerivativePair<double>;

}  // namespace fastabc

#endif  // FASTABC_TYPES_HPP_
