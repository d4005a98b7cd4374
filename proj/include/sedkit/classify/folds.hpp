#pragma once

#include <algorithm>
#include <vector>

#include "sedkit/random.hpp"
#include "sedkit/types.hpp"

namespace sedkit {

/// Class-stratified fold assignment: members of each class are shuffled with
/// a per-class stream and dealt round-robin, with a rotating start so no
/// fold is systematically larger. Classes with fewer members than folds
/// simply appear in fewer folds.
inline std::vector<int> stratified_fold_assignment(const std::vector<int>& y,
                                                   int k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("cross-validation needs at least 2 folds");
  std::vector<int> fold(y.size(), -1);
  int max_label = -1;
  for (int label : y) max_label = std::max(max_label, label);
  Rng root(seed);
  for (int label = 0; label <= max_label; ++label) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < y.size(); ++i)
      if (y[i] == label) members.push_back(i);
    if (members.empty()) continue;
    Rng rng = root.fork(static_cast<std::uint64_t>(label));
    rng.shuffle(members);
    for (std::size_t j = 0; j < members.size(); ++j)
      fold[members[j]] = static_cast<int>((j + label) % k);
  }
  return fold;
}

}  // namespace sedkit
