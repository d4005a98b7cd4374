#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sedkit/classify/decision_tree.hpp"
#include "sedkit/random.hpp"
#include "sedkit/types.hpp"

namespace sedkit {

/// Boosted ensemble where each round trains its weak learner (a depth-
/// limited tree) on a class-balanced random undersample, while errors and
/// weight updates use the full training set. Multi-class weighting follows
/// the K-class generalization of the AdaBoost schedule.
struct RusBoostModel {
  int n_classes = 0;
  int tree_depth = 3;
  std::vector<DecisionTree> learners;
  std::vector<double> alphas;

  /// Normalized weighted-vote share per class.
  std::vector<double> scores(const double* x) const {
    std::vector<double> votes(n_classes, 0.0);
    double total = 0.0;
    for (std::size_t t = 0; t < learners.size(); ++t) {
      votes[learners[t].predict(x)] += alphas[t];
      total += alphas[t];
    }
    if (total > 0.0)
      for (double& v : votes) v /= total;
    return votes;
  }
};

struct RusBoostOptions {
  std::uint32_t rounds = 100;
  int tree_depth = 3;
  std::uint64_t seed = 1;
  std::uint32_t max_redraws = 10;  // for rounds with error >= 1 - 1/K
};

inline RusBoostModel train_rusboost(const DataMatrix& x,
                                    const std::vector<int>& y, int n_classes,
                                    const RusBoostOptions& opt) {
  if (opt.rounds < 1) throw ConfigError("rusboost needs at least 1 round");
  const std::size_t n = x.rows;

  std::vector<std::vector<std::size_t>> by_class(n_classes);
  for (std::size_t i = 0; i < n; ++i) by_class[y[i]].push_back(i);
  std::size_t smallest = n;
  for (const auto& members : by_class)
    if (!members.empty()) smallest = std::min(smallest, members.size());

  RusBoostModel model;
  model.n_classes = n_classes;
  model.tree_depth = opt.tree_depth;

  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  Rng root(opt.seed);
  const double chance = 1.0 - 1.0 / static_cast<double>(n_classes);
  std::uint64_t draw_stream = 0;

  for (std::uint32_t round = 0; round < opt.rounds; ++round) {
    DecisionTree tree;
    double err = 1.0;
    bool usable = false;
    for (std::uint32_t attempt = 0; attempt <= opt.max_redraws; ++attempt) {
      // balanced undersample: each class capped at the smallest class size
      Rng rng = root.fork(draw_stream++);
      std::vector<std::size_t> subset;
      for (const auto& members : by_class) {
        if (members.size() <= smallest) {
          subset.insert(subset.end(), members.begin(), members.end());
        } else {
          auto chosen = rng.sample_without_replacement(members.size(), smallest);
          std::sort(chosen.begin(), chosen.end());
          for (std::size_t c : chosen) subset.push_back(members[c]);
        }
      }
      tree = train_decision_tree(x, y, w, n_classes, opt.tree_depth, &subset);

      err = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        if (tree.predict(x.row(i)) != y[i]) err += w[i];
      if (err < chance) {
        usable = true;
        break;
      }
    }
    if (!usable) break;  // no weak learner beats chance; stop early

    const double eps = std::clamp(err, 1e-10, 1.0 - 1e-10);
    const double alpha =
        std::log((1.0 - eps) / eps) + std::log(static_cast<double>(n_classes) - 1.0);
    model.learners.push_back(std::move(tree));
    model.alphas.push_back(alpha);

    if (err <= 0.0) break;  // perfect learner dominates; further rounds are moot

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (model.learners.back().predict(x.row(i)) != y[i])
        w[i] *= std::exp(alpha);
      total += w[i];
    }
    for (double& v : w) v /= total;
  }

  if (model.learners.empty()) {
    // degenerate data: fall back to a single majority-vote stump
    std::vector<double> uniform(n, 1.0 / static_cast<double>(n));
    model.learners.push_back(
        train_decision_tree(x, y, uniform, n_classes, opt.tree_depth));
    model.alphas.push_back(1.0);
  }
  return model;
}

}  // namespace sedkit
