#pragma once

#include <cmath>
#include <vector>

#include "sedkit/types.hpp"

namespace sedkit {

/// Isometric log-ratio transform: maps a strictly positive composition of
/// dimension T to an unconstrained vector of dimension T-1. Component j
/// (1-based) is sqrt(j/(j+1)) * ln(geometric_mean(x_1..x_j) / x_{j+1}).
///
/// The log differences are summed pairwise so that equal components cancel
/// exactly and the uniform composition maps to the exact zero vector.
inline std::vector<double> ilr_transform(const std::vector<double>& simplex) {
  const std::size_t t = simplex.size();
  if (t < 2) throw DataError("ilr transform needs at least 2 components");
  double sum = 0.0;
  for (double x : simplex) {
    if (!(x > 0.0))
      throw DataError(
          "ilr transform requires strictly positive components; apply "
          "smoothing upstream");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw DataError("ilr transform input must sum to 1");

  std::vector<double> logs(t);
  for (std::size_t i = 0; i < t; ++i) logs[i] = std::log(simplex[i]);

  std::vector<double> out(t - 1);
  for (std::size_t j = 1; j < t; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < j; ++i) s += logs[i] - logs[j];
    out[j - 1] = std::sqrt(static_cast<double>(j) / static_cast<double>(j + 1)) *
                 s / static_cast<double>(j);
  }
  return out;
}

}  // namespace sedkit
