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

// Dense dataset loading from CSV (label in the first column) and libsvm
// ("label idx:val ...", 1-based indices) files.

#ifndef FASTABC_DATASET_HPP_
#define FASTABC_DATASET_HPP_

#include <filesystem>
#include <istream>
#include <vector>

#include <Eigen/Core>

#include "fastabc/types.hpp"

namespace fastabc {

enum class DataFormat { Csv, Libsvm };

struct RawDataset {
  Eigen::MatrixXd features;  // n x d
  Eigen::VectorXd labels;    // n
  DataFormat format = DataFormat::Csv;

  Index n() const { return features.rows(); }
  Index d() const { return features.cols(); }
};

RawDataset parse_csv(std::istream& in);
RawDataset load_csv(const std::filesystem::path& path);

/// Rows are padded with zeros to max(max index seen, min_features) columns.
RawDataset parse_libsvm(std::istream& in, Index min_features = 0);
RawDataset load_libsvm(const std::filesystem::path& path,
                       Index min_features = 0);

/// Libsvm if the first data line contains ':', CSV otherwise.
RawDataset load_dataset(const std::filesystem::path& path,
                        Index min_features = 0);

/// Contiguous class indices for arbitrary label values, ordered by value.
struct LabelMap {
  std::vector<double> classes;  // class index -> original label

  static LabelMap fit(const Eigen::VectorXd& labels);
  int n_classes() const { return static_cast<int>(classes.size()); }
  /// Throws InputError for a label that is not one of `classes`.
  std::vector<int> encode(const Eigen::VectorXd& labels) const;
};

}  // namespace fastabc

#endif  // FASTABC_DATASET_HPP_
