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

// Fixed-length adaptive feature binning.
//
// Each feature is sorted and walked from the smallest value upwards. A new bin
// is opened whenever a value exceeds the first value of the current bin by
// more than `bin_len`. If more than `max_bin + 1` bins are needed the pass is
// restarted with `bin_len` doubled. Bins therefore only exist where there is
// data, and features with few distinct values keep one bin per value.

#ifndef FASTABC_BINNING_HPP_
#define FASTABC_BINNING_HPP_

#include <vector>

#include <Eigen/Core>

#include "fastabc/types.hpp"

namespace fastabc {

struct BinnerConfig {
  int max_bin = 1000;
  double initial_bin_len = 1e-10;

  /// Throws ConfigError unless max_bin >= 1 and initial_bin_len > 0.
  void validate() const;
};

/// Upper edges of the bins of one feature. A value x falls into bin b when
/// boundaries[b-1] < x <= boundaries[b]; values outside the training range
/// are clamped to the first or last bin.
struct FeatureBinMap {
  std::vector<double> boundaries;
  double final_bin_len = 0.0;

  int n_bins() const { return static_cast<int>(boundaries.size()) + 1; }

  friend bool operator==(const FeatureBinMap&, const FeatureBinMap&) = default;
};

/// Result of binning a single training column.
struct FeatureBinning {
  FeatureBinMap map;
  std::vector<BinIndex> assignment;  // per input row, in input order
};

struct BinnedDataset {
  BinMatrix bins;  // n x d
  std::vector<FeatureBinMap> maps;

  Index n() const { return bins.rows(); }
  Index d() const { return bins.cols(); }
  int n_bins(Index feature) const { return maps[feature].n_bins(); }
};

/// Bins one training column and returns both the reusable map and the
/// integer assignment of every input value. Throws InputError on an empty
/// column or a non-finite value.
FeatureBinning bin_feature(const Eigen::Ref<const Eigen::VectorXd>& values,
                           const BinnerConfig& config);

/// Same as bin_feature but keeps only the map.
FeatureBinMap fit_feature(const Eigen::Ref<const Eigen::VectorXd>& values,
                          const BinnerConfig& config);

/// Maps a value through a fitted map. Ties at a boundary go to the lower bin.
BinIndex bin_value(double x, const FeatureBinMap& map);

/// Bins every column of `raw` independently. Errors carry the feature index.
BinnedDataset fit_dataset(const Eigen::MatrixXd& raw,
                          const BinnerConfig& config);

/// Applies previously fitted maps to new rows (e.g. a test set).
BinnedDataset apply_bin_maps(const Eigen::MatrixXd& raw,
                             const std::vector<FeatureBinMap>& maps);

}  // namespace fastabc

#endif  // FASTABC_BINNING_HPP_
