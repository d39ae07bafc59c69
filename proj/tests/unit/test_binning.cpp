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
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace fastabc {
namespace {

Eigen::VectorXd to_vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Index>(v.size()));
}

BinnerConfig with_max_bin(int max_bin) {
  BinnerConfig c;
  c.max_bin = max_bin;
  return c;
}

void expect_matches_reference(const std::vector<double>& col, int max_bin) {
  const FeatureBinning fb = bin_feature(to_vec(col), with_max_bin(max_bin));
  const oracle::MatlabBins ref = oracle::adabin1feature(col, max_bin);
  ASSERT_EQ(fb.assignment.size(), col.size());
  for (std::size_t i = 0; i < col.size(); ++i) {
    ASSERT_EQ(static_cast<double>(fb.assignment[i]), ref.output[i]) << "row " << i;
    // the stored map must reproduce the training assignment
    ASSERT_EQ(bin_value(col[i], fb.map), fb.assignment[i]) << "row " << i;
  }
  EXPECT_EQ(fb.map.final_bin_len, ref.bin_len);
  const double top = *std::max_element(ref.output.begin(), ref.output.end());
  EXPECT_EQ(fb.map.n_bins(), static_cast<int>(top) + 1);
}

TEST(Binning, ThirteenDistinctValuesGiveThirteenBins) {
  std::vector<double> col;
  for (int v = 12; v >= 0; --v) col.insert(col.end(), 3, v * 0.25);
  const FeatureBinning fb = bin_feature(to_vec(col), BinnerConfig{});
  EXPECT_EQ(fb.map.n_bins(), 13);
  for (std::size_t i = 0; i < col.size(); ++i)
    EXPECT_EQ(fb.assignment[i], static_cast<BinIndex>(col[i] / 0.25));
}

TEST(Binning, BinaryFeature) {
  const FeatureBinning fb = bin_feature(to_vec({1, 0, 0, 1, 1}), BinnerConfig{});
  EXPECT_EQ(fb.map.n_bins(), 2);
  EXPECT_EQ(fb.assignment, (std::vector<BinIndex>{1, 0, 0, 1, 1}));
  EXPECT_EQ(bin_value(0.0, fb.map), 0u);
  EXPECT_EQ(bin_value(1.0, fb.map), 1u);
}

TEST(Binning, ConstantColumnIsOneBin) {
  Eigen::MatrixXd raw = Eigen::MatrixXd::Constant(20, 1, 3.5);
  const BinnedDataset ds = fit_dataset(raw, BinnerConfig{});
  EXPECT_EQ(ds.n_bins(0), 1);
  EXPECT_TRUE((ds.bins.array() == 0).all());
}

TEST(Binning, MatchesReferenceOnUniformColumn) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> col(5000);
  for (double& v : col) v = u(rng);
  expect_matches_reference(col, 100);
}

TEST(Binning, MatchesReferenceOnAssortedColumns) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> small_int(0, 40);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> col(300 + 50 * trial);
    for (double& v : col) {
      switch (trial % 3) {
        case 0: v = normal(rng); break;
        case 1: v = small_int(rng); break;
        default: v = std::exp(3 * normal(rng)); break;
      }
    }
    for (int max_bin : {1, 2, 10, 100, 1000}) expect_matches_reference(col, max_bin);
  }
}

TEST(Binning, BinaryAndManyValuedColumns) {
  std::mt19937_64 rng(3);
  Eigen::MatrixXd raw(400, 2);
  for (Index i = 0; i < raw.rows(); ++i) {
    raw(i, 0) = static_cast<double>(rng() % 2);
    raw(i, 1) = static_cast<double>(i % 200) * 0.37;
  }
  const BinnedDataset ds = fit_dataset(raw, with_max_bin(100));
  EXPECT_EQ(ds.n_bins(0), 2);
  EXPECT_LE(ds.n_bins(1), 101);
  for (Index f = 0; f < 2; ++f) {
    std::vector<double> col(raw.col(f).data(), raw.col(f).data() + raw.rows());
    const oracle::MatlabBins ref = oracle::adabin1feature(col, 100);
    for (Index i = 0; i < raw.rows(); ++i)
      ASSERT_EQ(static_cast<double>(ds.bins(i, f)), ref.output[i]);
  }
}

TEST(Binning, ProbeValuesAgreeWithLinearScan) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal(0.0, 2.0);
  std::vector<double> col(800);
  for (double& v : col) v = std::round(normal(rng) * 50) / 50;
  const FeatureBinning fb = bin_feature(to_vec(col), with_max_bin(30));

  // per bin: [lowest, highest] training value
  std::vector<std::pair<double, double>> span(fb.map.n_bins(),
                                              {INFINITY, -INFINITY});
  for (std::size_t i = 0; i < col.size(); ++i) {
    auto& s = span[fb.assignment[i]];
    s.first = std::min(s.first, col[i]);
    s.second = std::max(s.second, col[i]);
  }
  std::uniform_real_distribution<double> probe(-10, 10);
  for (int t = 0; t < 1000; ++t) {
    const double x = probe(rng);
    // the bin whose extended interval (previous bin's max, own max] holds x,
    // with the gap split at the midpoint
    int expect = fb.map.n_bins() - 1;
    for (int b = 0; b + 1 < fb.map.n_bins(); ++b) {
      const double edge = span[b].second + (span[b + 1].first - span[b].second) / 2;
      if (x <= edge) {
        expect = b;
        break;
      }
    }
    ASSERT_EQ(bin_value(x, fb.map), static_cast<BinIndex>(expect)) << x;
  }
  EXPECT_EQ(bin_value(-1e300, fb.map), 0u);
  EXPECT_EQ(bin_value(1e300, fb.map), static_cast<BinIndex>(fb.map.n_bins() - 1));
}

TEST(Binning, RebinningIndicesIsIdentity) {
  std::mt19937_64 rng(9);
  std::vector<double> col(2000);
  for (double& v : col) v = static_cast<double>(rng() % 1000) / 7.0;
  for (int max_bin : {10, 100, 1000}) {
    const FeatureBinning first = bin_feature(to_vec(col), with_max_bin(max_bin));
    std::vector<double> idx(first.assignment.begin(), first.assignment.end());
    const FeatureBinning second = bin_feature(to_vec(idx), with_max_bin(max_bin));
    EXPECT_EQ(first.assignment, second.assignment);
  }
}

TEST(Binning, MonotoneAndWithinBudget) {
  std::mt19937_64 rng(13);
  std::lognormal_distribution<double> ln(0.0, 2.0);
  std::vector<double> col(3000);
  for (double& v : col) v = ln(rng);
  for (int max_bin : {1, 10, 100, 1000}) {
    const FeatureBinning fb = bin_feature(to_vec(col), with_max_bin(max_bin));
    EXPECT_LE(fb.map.n_bins(), max_bin + 1);
    EXPECT_TRUE(std::is_sorted(fb.map.boundaries.begin(), fb.map.boundaries.end()));
    EXPECT_EQ(std::adjacent_find(fb.map.boundaries.begin(), fb.map.boundaries.end()),
              fb.map.boundaries.end());
    for (std::size_t i = 0; i < col.size(); ++i)
      for (std::size_t j = i + 1; j < std::min(col.size(), i + 50); ++j)
        if (col[i] <= col[j]) ASSERT_LE(fb.assignment[i], fb.assignment[j]);
  }
}

TEST(Binning, FewDistinctWellSeparatedValuesKeepOwnBins) {
  const std::vector<double> col{5, 1, 9, 1, 3, 7, 5};
  const FeatureBinning fb = bin_feature(to_vec(col), with_max_bin(10));
  EXPECT_EQ(fb.map.n_bins(), 5);
  EXPECT_EQ(fb.assignment, (std::vector<BinIndex>{2, 0, 4, 0, 1, 3, 2}));
}

TEST(Binning, RejectsBadInput) {
  EXPECT_THROW(bin_feature(to_vec({1.0, NAN}), BinnerConfig{}), InputError);
  EXPECT_THROW(bin_feature(Eigen::VectorXd(0), BinnerConfig{}), InputError);
  EXPECT_THROW(bin_feature(to_vec({1.0}), with_max_bin(0)), ConfigError);
  const FeatureBinMap map = fit_feature(to_vec({0.0, 1.0}), BinnerConfig{});
  EXPECT_THROW(bin_value(INFINITY, map), InputError);

  Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(3, 3);
  raw(1, 2) = NAN;
  try {
    fit_dataset(raw, BinnerConfig{});
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("feature 2"), std::string::npos);
  }
  EXPECT_THROW(apply_bin_maps(Eigen::MatrixXd::Zero(2, 2), {map}), InputError);
}

}  // namespace
}  // namespace fastabc
