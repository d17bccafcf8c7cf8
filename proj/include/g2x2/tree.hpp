// Copyright 2026 The g2x2 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef G2X2_TREE_HPP_
#define G2X2_TREE_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "g2x2/error.hpp"

namespace g2x2 {

struct TreeOptions {
  int max_depth = 3;
  int min_leaf = 5;
};

// Nodes are stored in a flat array; children of a split go left when
// x[feature] <= threshold.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
  int n = 0;
  int depth = 0;
  // Sum of squared deviations from the node mean.
  double sse = 0.0;

  bool is_leaf() const { return feature < 0; }
};

struct RegressionTree {
  std::vector<TreeNode> nodes;

  double predict(const Eigen::RowVectorXd& x) const {
    int i = 0;
    while (!nodes[i].is_leaf()) i = x[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
    return nodes[i].value;
  }

  int depth() const {
    int d = 0;
    for (const TreeNode& n : nodes) d = std::max(d, n.depth);
    return d;
  }
};

namespace detail {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double sse = 0.0;
};

// Best variance-reducing split over all features and midpoints between
// distinct sorted values; ties keep the first feature found.
inline std::optional<Split> best_split(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                       const std::vector<int>& rows, int min_leaf, double parent_sse) {
  std::optional<Split> best;
  const auto n = static_cast<int>(rows.size());
  std::vector<int> order(rows);
  for (Eigen::Index f = 0; f < X.cols(); ++f) {
    std::sort(order.begin(), order.end(), [&](int a, int b) { return X(a, f) < X(b, f); });
    double total = 0.0, total_sq = 0.0;
    for (int r : order) {
      total += y[r];
      total_sq += y[r] * y[r];
    }
    double left = 0.0, left_sq = 0.0;
    for (int i = 0; i < n - 1; ++i) {
      left += y[order[i]];
      left_sq += y[order[i]] * y[order[i]];
      const int nl = i + 1, nr = n - nl;
      if (X(order[i], f) == X(order[i + 1], f) || nl < min_leaf || nr < min_leaf) continue;
      const double right = total - left, right_sq = total_sq - left_sq;
      const double sse = std::max(0.0, left_sq - left * left / nl) + std::max(0.0, right_sq - right * right / nr);
      if (sse < parent_sse - 1e-12 * std::max(1.0, parent_sse) && (!best || sse < best->sse)) {
        best = Split{static_cast<int>(f), 0.5 * (X(order[i], f) + X(order[i + 1], f)), sse};
      }
    }
  }
  return best;
}

}  // namespace detail

// CART regression tree: leaves predict the mean, internal nodes must
// strictly reduce the summed squared error and keep min_leaf rows per side.
inline RegressionTree decision_tree_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const TreeOptions& opt = {}) {
  if (X.rows() != y.size()) throw Error(ErrorKind::kInvalidArgument, "design and target sizes differ");
  if (X.rows() < 1) throw Error(ErrorKind::kEmptyDataset, "tree needs data");
  RegressionTree tree;
  std::vector<std::vector<int>> members;
  auto make_node = [&](std::vector<int> rows, int depth) {
    TreeNode node;
    node.n = static_cast<int>(rows.size());
    node.depth = depth;
    double sum = 0.0;
    for (int r : rows) sum += y[r];
    node.value = sum / node.n;
    for (int r : rows) node.sse += (y[r] - node.value) * (y[r] - node.value);
    tree.nodes.push_back(node);
    members.push_back(std::move(rows));
    return static_cast<int>(tree.nodes.size()) - 1;
  };
  std::vector<int> all(static_cast<std::size_t>(X.rows()));
  std::iota(all.begin(), all.end(), 0);
  make_node(std::move(all), 0);
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    if (tree.nodes[i].depth >= opt.max_depth) continue;
    const auto split = detail::best_split(X, y, members[i], opt.min_leaf, tree.nodes[i].sse);
    if (!split) continue;
    std::vector<int> left, right;
    for (int r : members[i]) (X(r, split->feature) <= split->threshold ? left : right).push_back(r);
    const int depth = tree.nodes[i].depth + 1;
    const int l = make_node(std::move(left), depth);
    const int r = make_node(std::move(right), depth);
    tree.nodes[i].feature = split->feature;
    tree.nodes[i].threshold = split->threshold;
    tree.nodes[i].left = l;
    tree.nodes[i].right = r;
  }
  return tree;
}

}  // namespace g2x2

#endif  // G2X2_TREE_HPP_
