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

#include "fastabc/binning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace fastabc {

void BinnerConfig::validate() const {
  if (max_bin < 1) throw ConfigError("max_bin must be >= 1");
  if (!(initial_bin_len > 0.0) || !std::isfinite(initial_bin_len))
    throw ConfigError("initial bin length must be positive");
}

FeatureBinning bin_feature(const Eigen::Ref<const Eigen::VectorXd>& values,
                           const BinnerConfig& config) {
  config.validate();
  const Index n = values.size();
  if (n == 0) throw InputError("cannot bin an empty column");
  for (Index i = 0; i < n; ++i) {
    if (!std::isfinite(values[i]))
      throw InputError("non-finite value at row " + std::to_string(i));
  }

  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return values[a] < values[b]; });
  std::vector<double> sorted(n);
  for (Index i = 0; i < n; ++i) sorted[i] = values[order[i]];

  const BinIndex max_bin = static_cast<BinIndex>(config.max_bin);
  std::vector<BinIndex> sorted_bins(n, 0);
  double bin_len = config.initial_bin_len;
  BinIndex cur_bin = 0;
  while (true) {
    cur_bin = 0;
    Index anchor = 0;
    for (Index i = 0; i < n; ++i) {
      if (sorted[i] - sorted[anchor] > bin_len) {
        ++cur_bin;
        anchor = i;
        if (cur_bin > max_bin) {
          bin_len *= 2;
          break;
        }
      }
      sorted_bins[i] = cur_bin;
    }
    if (cur_bin <= max_bin) break;
  }

  FeatureBinning out;
  out.map.final_bin_len = bin_len;
  out.map.boundaries.reserve(cur_bin);
  for (Index i = 0; i + 1 < n; ++i) {
    if (sorted_bins[i + 1] != sorted_bins[i]) {
      const double lo = sorted[i];
      const double hi = sorted[i + 1];
      double mid = lo + (hi - lo) / 2;
      // Adjacent doubles: keep the edge inside [lo, hi).
      if (!(mid < hi)) mid = lo;
      out.map.boundaries.push_back(mid);
    }
  }
  out.assignment.resize(n);
  for (Index i = 0; i < n; ++i) out.assignment[order[i]] = sorted_bins[i];
  return out;
}

FeatureBinMap fit_feature(const Eigen::Ref<const Eigen::VectorXd>& values,
                          const BinnerConfig& config) {
  return bin_feature(values, config).map;
}

BinIndex bin_value(double x, const FeatureBinMap& map) {
  if (!std::isfinite(x)) throw InputError("cannot bin a non-finite value");
  const auto it =
      std::lower_bound(map.boundaries.begin(), map.boundaries.end(), x);
  return static_cast<BinIndex>(it - map.boundaries.begin());
}

BinnedDataset fit_dataset(const Eigen::MatrixXd& raw,
                          const BinnerConfig& config) {
  config.validate();
  if (raw.rows() < 1 || raw.cols() < 1)
    throw InputError("dataset needs at least one row and one feature");
  BinnedDataset out;
  out.bins.resize(raw.rows(), raw.cols());
  out.maps.reserve(raw.cols());
  for (Index f = 0; f < raw.cols(); ++f) {
    FeatureBinning fb;
    try {
      fb = bin_feature(raw.col(f), config);
    } catch (const InputError& e) {
      throw InputError("feature " + std::to_string(f) + ": " + e.what());
    }
    for (Index i = 0; i < raw.rows(); ++i) out.bins(i, f) = fb.assignment[i];
    out.maps.push_back(std::move(fb.map));
  }
  return out;
}

BinnedDataset apply_bin_maps(const Eigen::MatrixXd& raw,
                             const std::vector<FeatureBinMap>& maps) {
  if (static_cast<std::size_t>(raw.cols()) != maps.size()) {
    throw InputError("feature count mismatch: data has " +
                     std::to_string(raw.cols()) + ", model expects " +
                     std::to_string(maps.size()));
  }
  BinnedDataset out;
  out.maps = maps;
  out.bins.resize(raw.rows(), raw.cols());
  for (Index f = 0; f < raw.cols(); ++f) {
    for (Index i = 0; i < raw.rows(); ++i) {
      try {
        out.bins(i, f) = bin_value(raw(i, f), maps[f]);
      } catch (const InputError&) {
        throw InputError("non-finite value at row " + std::to_string(i) +
                         ", feature " + std::to_string(f));
      }
    }
  }
  return out;
}

}  // namespace fastabc
