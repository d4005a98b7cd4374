#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "sedkit/image/sift.hpp"
#include "sedkit/random.hpp"
#include "sedkit/types.hpp"

namespace sedkit {

/// Class-stratified image selection for codebook training: up to `quota`
/// images per class, every image of classes smaller than the quota, chosen
/// with a seeded generator. Classes without images are skipped and reported.
struct StratifiedSample {
  std::vector<std::size_t> record_indices;  // ascending within each class
  std::vector<ClassLabel> empty_classes;
  std::string spec;  // human-readable provenance string
};

inline StratifiedSample stratified_image_sample(
    const std::vector<std::optional<ClassLabel>>& labels, std::size_t quota,
    std::uint64_t seed) {
  StratifiedSample out;
  Rng root(seed);
  out.spec = "per-class quota " + std::to_string(quota) + ", seed " +
             std::to_string(seed);
  for (ClassLabel cls : kAllLabels) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) members.push_back(i);
    if (members.empty()) {
      out.empty_classes.push_back(cls);
      continue;
    }
    if (members.size() > quota) {
      Rng rng = root.fork(static_cast<std::uint64_t>(cls));
      auto chosen = rng.sample_without_replacement(members.size(), quota);
      std::sort(chosen.begin(), chosen.end());
      for (std::size_t c : chosen) out.record_indices.push_back(members[c]);
    } else {
      for (std::size_t i : members) out.record_indices.push_back(i);
    }
  }
  return out;
}

/// Stacks descriptor sets into one matrix, one descriptor per row, in input
/// order.
inline DataMatrix stack_descriptors(
    const std::vector<const LocalDescriptorSet*>& sets) {
  std::size_t total = 0;
  for (const auto* s : sets) total += s->size();
  DataMatrix m(total, 128);
  std::size_t row = 0;
  for (const auto* s : sets) {
    for (const auto& d : s->descriptors) {
      for (int j = 0; j < 128; ++j) m.at(row, j) = d[j];
      ++row;
    }
  }
  return m;
}

}  // namespace sedkit
