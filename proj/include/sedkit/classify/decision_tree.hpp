#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "sedkit/types.hpp"

namespace sedkit {

/// Depth-limited axis-aligned decision tree on weighted samples (Gini
/// impurity). Deterministic: tie-breaks prefer the lowest feature index and
/// the lowest threshold.
struct DecisionTree {
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int label = 0;
  };
  std::vector<Node> nodes;

  int predict(const double* x) const {
    int idx = 0;
    while (nodes[idx].feature >= 0)
      idx = x[nodes[idx].feature] <= nodes[idx].threshold ? nodes[idx].left
                                                          : nodes[idx].right;
    return nodes[idx].label;
  }
};

namespace detail {

struct TreeBuilder {
  const DataMatrix& x;
  const std::vector<int>& y;
  const std::vector<double>& w;
  int n_classes;
  int max_depth;
  DecisionTree tree;

  int build(std::vector<std::size_t>& items, int depth) {
    std::vector<double> class_mass(n_classes, 0.0);
    double total = 0.0;
    for (std::size_t i : items) {
      class_mass[y[i]] += w[i];
      total += w[i];
    }
    int majority = 0;
    for (int c = 1; c < n_classes; ++c)
      if (class_mass[c] > class_mass[majority]) majority = c;

    auto make_leaf = [&]() {
      DecisionTree::Node leaf;
      leaf.label = majority;
      tree.nodes.push_back(leaf);
      return static_cast<int>(tree.nodes.size() - 1);
    };

    double gini = 1.0;
    if (total > 0.0) {
      gini = 1.0;
      for (int c = 0; c < n_classes; ++c) {
        const double p = class_mass[c] / total;
        gini -= p * p;
      }
    }
    if (depth >= max_depth || gini <= 0.0 || items.size() < 2 || total <= 0.0)
      return make_leaf();

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_score = gini;  // weighted child impurity must beat the parent
    std::vector<std::size_t> order(items);
    std::vector<double> left_mass(n_classes);

    for (std::size_t f = 0; f < x.cols; ++f) {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double va = x.at(a, f), vb = x.at(b, f);
        if (va != vb) return va < vb;
        return a < b;
      });
      std::fill(left_mass.begin(), left_mass.end(), 0.0);
      double left_total = 0.0;
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        const std::size_t i = order[k];
        left_mass[y[i]] += w[i];
        left_total += w[i];
        const double v = x.at(i, f), v_next = x.at(order[k + 1], f);
        if (v == v_next) continue;
        const double right_total = total - left_total;
        if (left_total <= 0.0 || right_total <= 0.0) continue;
        double gl = 1.0, gr = 1.0;
        for (int c = 0; c < n_classes; ++c) {
          const double pl = left_mass[c] / left_total;
          const double pr = (class_mass[c] - left_mass[c]) / right_total;
          gl -= pl * pl;
          gr -= pr * pr;
        }
        const double score = (left_total * gl + right_total * gr) / total;
        if (score < best_score - 1e-12) {
          best_score = score;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (v + v_next);
        }
      }
    }
    if (best_feature < 0) return make_leaf();

    std::vector<std::size_t> left_items, right_items;
    for (std::size_t i : items) {
      if (x.at(i, best_feature) <= best_threshold)
        left_items.push_back(i);
      else
        right_items.push_back(i);
    }
    if (left_items.empty() || right_items.empty()) return make_leaf();

    DecisionTree::Node node;
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.label = majority;
    tree.nodes.push_back(node);
    const int self = static_cast<int>(tree.nodes.size() - 1);
    const int left = build(left_items, depth + 1);
    const int right = build(right_items, depth + 1);
    tree.nodes[self].left = left;
    tree.nodes[self].right = right;
    return self;
  }
};

}  // namespace detail

inline DecisionTree train_decision_tree(const DataMatrix& x,
                                        const std::vector<int>& y,
                                        const std::vector<double>& weights,
                                        int n_classes, int max_depth,
                                        const std::vector<std::size_t>* subset = nullptr) {
  detail::TreeBuilder builder{x, y, weights, n_classes, max_depth, {}};
  std::vector<std::size_t> items;
  if (subset) {
    items = *subset;
  } else {
    items.resize(x.rows);
    std::iota(items.begin(), items.end(), 0);
  }
  builder.build(items, 0);
  return builder.tree;
}

}  // namespace sedkit
