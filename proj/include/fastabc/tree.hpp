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

// Histogram regression trees over binned features, grown best-first.
//
// A tree is fitted to per-row derivatives (L', L''). Split quality is the
// reduction in weighted squared error of the implied responses
// z = -L'/L'' with weights L''. Written in terms of group sums,
//
//   gain = G_L^2 / H_L + G_R^2 / H_R - G^2 / H,
//
// only hessian *sums* appear as denominators, so rows whose individual
// hessian is close to zero never cause a division blow-up. The first-order
// variant replaces every H by a row count.

#ifndef FASTABC_TREE_HPP_
#define FASTABC_TREE_HPP_

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "fastabc/binning.hpp"
#include "fastabc/types.hpp"

namespace fastabc {

enum class GainMode { SecondOrder, FirstOrder };

// Candidates whose hessian sum on either side is at or below this are skipped.
inline constexpr double kHessianSumGuard = 1e-12;

/// Gain of splitting a node into (left, total - left). In FirstOrder mode the
/// hessian arguments are row counts. Returns nullopt when the split violates
/// the mode's precondition; otherwise the gain clamped to >= 0.
template <typename Scalar>
std::optional<Scalar> split_gain(Scalar sum_grad_left, Scalar sum_hess_left,
                                 Scalar sum_grad_total, Scalar sum_hess_total,
                                 GainMode mode) {
  const Scalar sum_grad_right = sum_grad_total - sum_grad_left;
  const Scalar sum_hess_right = sum_hess_total - sum_hess_left;
  if (mode == GainMode::SecondOrder) {
    if (!(sum_hess_left > Scalar(kHessianSumGuard)) ||
        !(sum_hess_right > Scalar(kHessianSumGuard)))
      return std::nullopt;
  } else {
    if (sum_hess_left < Scalar(1) || sum_hess_right < Scalar(1))
      return std::nullopt;
  }
  // GL^2/HL + GR^2/HR - G^2/H with H = HL + HR, rearranged so that no large
  // terms cancel.
  const Scalar cross = sum_grad_left * sum_hess_right -
                       sum_grad_right * sum_hess_left;
  const Scalar gain = cross / sum_hess_left * (cross / sum_hess_right) /
                      (sum_hess_left + sum_hess_right);
  return gain > Scalar(0) ? gain : Scalar(0);
}

/// Per-row derivatives a tree is fitted to. In FirstOrder mode `hess` is only
/// used by the caller's leaf-value rule.
struct WorkingSet {
  Eigen::VectorXd grad;
  Eigen::VectorXd hess;
};

struct SplitCandidate {
  Index feature = 0;
  BinIndex threshold_bin = 0;  // rows with bin <= threshold_bin go left
  double gain = 0.0;
};

class RegressionTree {
 public:
  struct Node {
    // Leaves have feature == -1.
    Index feature = -1;
    BinIndex threshold_bin = 0;
    int left = -1;
    int right = -1;
    double value = 0.0;

    bool is_leaf() const { return feature < 0; }
    friend bool operator==(const Node&, const Node&) = default;
  };

  /// A single leaf with value 0.
  RegressionTree();

  /// Validates structure: node 0 is the root, children indices in range,
  /// every node reachable exactly once. Throws InputError otherwise.
  explicit RegressionTree(std::vector<Node> nodes);

  const std::vector<Node>& nodes() const { return nodes_; }
  int leaf_count() const;

  /// Routes a row of bin indices (anything indexable with operator()) to a
  /// leaf and returns that leaf's node index.
  template <typename Row>
  int leaf_index(const Row& row) const {
    int at = 0;
    while (!nodes_[at].is_leaf()) {
      const Node& node = nodes_[at];
      at = row(node.feature) <= node.threshold_bin ? node.left : node.right;
    }
    return at;
  }

  void set_leaf_value(int node, double value);

  /// Splits leaf `node` and returns the index of the new left child; the
  /// right child is the returned index + 1.
  int split_leaf(int node, Index feature, BinIndex threshold_bin);

  friend bool operator==(const RegressionTree&, const RegressionTree&) =
      default;

 private:
  std::vector<Node> nodes_;
};

/// Leaf value for one row.
template <typename Row>
double predict_row(const RegressionTree& tree, const Row& row) {
  return tree.nodes()[tree.leaf_index(row)].value;
}

/// Leaf values for every row of a bin matrix.
Eigen::VectorXd predict(const RegressionTree& tree, const BinMatrix& bins);

struct LeafRegion {
  int node = 0;
  std::vector<Index> rows;  // ascending
};

/// A freshly grown tree together with the training rows of every leaf, so the
/// caller can apply its own terminal-value rule.
struct GrownTree {
  RegressionTree tree;
  std::vector<LeafRegion> leaves;
  std::vector<SplitCandidate> splits;  // in the order they were applied
};

/// Best split of `rows` over all features; nullopt if no candidate has a
/// strictly positive gain. Ties go to the lower feature, then lower bin.
std::optional<SplitCandidate> best_split(std::span<const Index> rows,
                                         const BinnedDataset& binned,
                                         const WorkingSet& work, GainMode mode);

/// Best-first growth up to `max_leaves` leaves. Leaf values are left at 0.
/// Throws ConfigError if max_leaves < 2.
GrownTree grow(const BinnedDataset& binned, const WorkingSet& work,
               int max_leaves, GainMode mode);

/// Sets every leaf value to value_of(rows of that leaf).
void assign_leaf_values(
    GrownTree& grown,
    const std::function<double(std::span<const Index>)>& value_of);

}  // namespace fastabc

#endif  // FASTABC_TREE_HPP_
