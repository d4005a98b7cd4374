#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "sedkit/encode/kmeans.hpp"
#include "sedkit/image/sift.hpp"
#include "sedkit/types.hpp"

namespace sedkit {

/// Aggregated-residual encoding of dimension K*d: descriptor-to-nearest-
/// codeword residuals are summed per codeword, each block L2-normalized
/// (zero blocks stay zero), concatenated, then globally L2-normalized.
/// Summation order is fixed by codeword then input order, so permuting
/// descriptors leaves the output bitwise unchanged.
inline FeatureVector encode_vlad(const LocalDescriptorSet& descriptors,
                                 const Codebook& codebook,
                                 std::string name = "vlad") {
  if (codebook.dim != 128)
    throw DataError("codebook dimension does not match descriptor dimension");
  const std::uint32_t k = codebook.k;
  const std::uint32_t d = codebook.dim;

  std::vector<std::uint32_t> assign(descriptors.size());
  std::vector<double> x(d);
  for (std::size_t i = 0; i < descriptors.size(); ++i) {
    for (std::uint32_t j = 0; j < d; ++j) x[j] = descriptors.descriptors[i][j];
    assign[i] = detail::nearest_centroid(x.data(), codebook);
  }

  std::vector<double> blocks(static_cast<std::size_t>(k) * d, 0.0);
  for (std::uint32_t c = 0; c < k; ++c) {
    const double* centroid = codebook.centroid(c);
    double* block = blocks.data() + static_cast<std::size_t>(c) * d;
    for (std::size_t i = 0; i < descriptors.size(); ++i) {
      if (assign[i] != c) continue;
      const auto& desc = descriptors.descriptors[i];
      for (std::uint32_t j = 0; j < d; ++j) block[j] += desc[j] - centroid[j];
    }
  }

  for (std::uint32_t c = 0; c < k; ++c) {
    double* block = blocks.data() + static_cast<std::size_t>(c) * d;
    double norm = 0.0;
    for (std::uint32_t j = 0; j < d; ++j) norm += block[j] * block[j];
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (std::uint32_t j = 0; j < d; ++j) block[j] /= norm;
  }

  FeatureVector v = FeatureVector::dense(std::move(name), std::move(blocks));
  v.l2_normalize();
  return v;
}

}  // namespace sedkit
