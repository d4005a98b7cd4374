#pragma once

#include <string>
#include <vector>

#include "sedkit/encode/kmeans.hpp"
#include "sedkit/image/sift.hpp"
#include "sedkit/types.hpp"

namespace sedkit {

/// Hard-assignment bag of words: each descriptor increments the bin of its
/// nearest codeword (ties to the lowest index); the histogram is then
/// L2-normalized. An empty descriptor set yields the zero vector.
inline FeatureVector encode_bow_hard(const LocalDescriptorSet& descriptors,
                                     const Codebook& codebook,
                                     std::string name = "bow") {
  if (codebook.dim != 128)
    throw DataError("codebook dimension does not match descriptor dimension");
  std::vector<double> hist(codebook.k, 0.0);
  std::vector<double> x(128);
  for (const auto& d : descriptors.descriptors) {
    for (int j = 0; j < 128; ++j) x[j] = d[j];
    hist[detail::nearest_centroid(x.data(), codebook)] += 1.0;
  }
  FeatureVector v = FeatureVector::dense(std::move(name), std::move(hist));
  v.l2_normalize();
  return v;
}

}  // namespace sedkit
