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

#include "fastabc/tree.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace fastabc {

namespace {

struct HistBin {
  double grad = 0.0;
  double hess = 0.0;
  Index count = 0;
};

struct FrontierLeaf {
  int node = 0;
  std::vector<Index> rows;
  std::optional<SplitCandidate> best;
};

}  // namespace

RegressionTree::RegressionTree() : nodes_(1) {}

RegressionTree::RegressionTree(std::vector<Node> nodes)
    : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw InputError("tree has no nodes");
  const int n = static_cast<int>(nodes_.size());
  std::vector<int> seen(n, 0);
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int at = stack.back();
    stack.pop_back();
    if (seen[at]++) throw InputError("tree node reached twice");
    const Node& node = nodes_[at];
    if (node.is_leaf()) continue;
    if (node.left < 0 || node.left >= n || node.right < 0 || node.right >= n)
      throw InputError("tree child index out of range");
    stack.push_back(node.right);
    stack.push_back(node.left);
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw InputError("tree has unreachable nodes");
}

int RegressionTree::leaf_count() const {
  return static_cast<int>(std::count_if(
      nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
}

void RegressionTree::set_leaf_value(int node, double value) {
  nodes_.at(node).value = value;
}

int RegressionTree::split_leaf(int node, Index feature,
                               BinIndex threshold_bin) {
  const int left = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  nodes_.emplace_back();
  Node& parent = nodes_.at(node);
  parent.feature = feature;
  parent.threshold_bin = threshold_bin;
  parent.left = left;
  parent.right = left + 1;
  parent.value = 0.0;
  return left;
}

Eigen::VectorXd predict(const RegressionTree& tree, const BinMatrix& bins) {
  Eigen::VectorXd out(bins.rows());
  for (Index i = 0; i < bins.rows(); ++i) out[i] = predict_row(tree, bins.row(i));
  return out;
}

std::optional<SplitCandidate> best_split(std::span<const Index> rows,
                                         const BinnedDataset& binned,
                                         const WorkingSet& work,
                                         GainMode mode) {
  if (rows.size() < 2) return std::nullopt;

  double total_grad = 0.0;
  double total_hess = 0.0;
  for (Index i : rows) {
    total_grad += work.grad[i];
    total_hess += work.hess[i];
  }
  const double total_count = static_cast<double>(rows.size());

  std::optional<SplitCandidate> best;
  std::vector<HistBin> hist;
  for (Index f = 0; f < binned.d(); ++f) {
    const int n_bins = binned.n_bins(f);
    if (n_bins < 2) continue;
    hist.assign(n_bins, HistBin{});
    const auto column = binned.bins.col(f);
    for (Index i : rows) {
      HistBin& bin = hist[column[i]];
      bin.grad += work.grad[i];
      bin.hess += work.hess[i];
      ++bin.count;
    }

    double left_grad = 0.0;
    double left_hess = 0.0;
    Index left_count = 0;
    for (int s = 0; s + 1 < n_bins; ++s) {
      left_grad += hist[s].grad;
      left_hess += hist[s].hess;
      left_count += hist[s].count;
      const Index right_count = static_cast<Index>(rows.size()) - left_count;
      if (left_count < 1) continue;
      if (right_count < 1) break;
      const std::optional<double> gain =
          mode == GainMode::SecondOrder
              ? split_gain(left_grad, left_hess, total_grad, total_hess, mode)
              : split_gain(left_grad, static_cast<double>(left_count),
                           total_grad, total_count, mode);
      if (!gain || !(*gain > 0.0)) continue;
      if (!best || *gain > best->gain) {
        best = SplitCandidate{f, static_cast<BinIndex>(s), *gain};
      }
    }
  }
  return best;
}

GrownTree grow(const BinnedDataset& binned, const WorkingSet& work,
               int max_leaves, GainMode mode) {
  if (max_leaves < 2)
    throw ConfigError("J (leaves per tree) must be >= 2, got " +
                      std::to_string(max_leaves));
  if (work.grad.size() != binned.n() || work.hess.size() != binned.n())
    throw InputError("derivative vectors do not match the dataset size");

  GrownTree out;
  std::vector<FrontierLeaf> frontier(1);
  frontier[0].rows.resize(binned.n());
  std::iota(frontier[0].rows.begin(), frontier[0].rows.end(), Index{0});
  frontier[0].best = best_split(frontier[0].rows, binned, work, mode);

  int leaves = 1;
  while (leaves < max_leaves) {
    int pick = -1;
    for (int j = 0; j < static_cast<int>(frontier.size()); ++j) {
      const auto& cand = frontier[j].best;
      if (!cand) continue;
      if (pick < 0) {
        pick = j;
        continue;
      }
      const FrontierLeaf& cur = frontier[pick];
      if (cand->gain > cur.best->gain ||
          (cand->gain == cur.best->gain && frontier[j].node < cur.node))
        pick = j;
    }
    if (pick < 0) break;

    FrontierLeaf parent = std::move(frontier[pick]);
    const SplitCandidate split = *parent.best;
    const int left =
        out.tree.split_leaf(parent.node, split.feature, split.threshold_bin);
    out.splits.push_back(split);
    ++leaves;

    FrontierLeaf lhs{left, {}, std::nullopt};
    FrontierLeaf rhs{left + 1, {}, std::nullopt};
    const auto column = binned.bins.col(split.feature);
    for (Index i : parent.rows) {
      (column[i] <= split.threshold_bin ? lhs.rows : rhs.rows).push_back(i);
    }
    if (leaves < max_leaves) {
      lhs.best = best_split(lhs.rows, binned, work, mode);
      rhs.best = best_split(rhs.rows, binned, work, mode);
    }
    frontier[pick] = std::move(lhs);
    frontier.push_back(std::move(rhs));
  }

  std::sort(frontier.begin(), frontier.end(),
            [](const FrontierLeaf& a, const FrontierLeaf& b) {
              return a.node < b.node;
            });
  out.leaves.reserve(frontier.size());
  for (FrontierLeaf& leaf : frontier)
    out.leaves.push_back(LeafRegion{leaf.node, std::move(leaf.rows)});
  return out;
}

void assign_leaf_values(
    GrownTree& grown,
    const std::function<double(std::span<const Index>)>& value_of) {
  for (const LeafRegion& leaf : grown.leaves)
    grown.tree.set_leaf_value(leaf.node, value_of(leaf.rows));
}

}  // namespace fastabc
