#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sedkit/types.hpp"

namespace sedkit {

/// Monotone logistic score-to-probability map shared by all classes of a
/// model: p = sigmoid(slope * score + intercept) with slope > 0. Because one
/// strictly increasing map is applied to every class score, the probability
/// ranking always matches the score ranking.
struct PlattScaling {
  double slope = 1.0;
  double intercept = 0.0;

  double operator()(double score) const {
    const double z = slope * score + intercept;
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
  }
};

inline constexpr double kMinPlattSlope = 1e-6;

/// Newton fit of the two-parameter logistic on (score, membership) pairs,
/// with the usual smoothed targets to avoid saturating on separable data.
/// The slope is floored at a small positive value so the map stays strictly
/// increasing.
inline PlattScaling fit_platt(const std::vector<double>& scores,
                              const std::vector<int>& is_positive) {
  if (scores.size() != is_positive.size() || scores.empty())
    throw DataError("platt fit needs aligned, nonempty score/target lists");

  std::size_t n_pos = 0;
  for (int p : is_positive) n_pos += p ? 1 : 0;
  const std::size_t n_neg = scores.size() - n_pos;
  const double t_pos = (static_cast<double>(n_pos) + 1.0) /
                       (static_cast<double>(n_pos) + 2.0);
  const double t_neg = 1.0 / (static_cast<double>(n_neg) + 2.0);

  double a = 1.0, b = 0.0;
  for (int iter = 0; iter < 100; ++iter) {
    double g_a = 0.0, g_b = 0.0, h_aa = 1e-12, h_ab = 0.0, h_bb = 1e-12;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const double s = scores[i];
      const double t = is_positive[i] ? t_pos : t_neg;
      const PlattScaling cur{a, b};
      const double p = cur(s);
      const double d = p - t;
      g_a += d * s;
      g_b += d;
      const double h = std::max(p * (1.0 - p), 1e-12);
      h_aa += h * s * s;
      h_ab += h * s;
      h_bb += h;
    }
    const double det = h_aa * h_bb - h_ab * h_ab;
    if (std::abs(det) < 1e-300) break;
    const double da = (g_a * h_bb - g_b * h_ab) / det;
    const double db = (g_b * h_aa - g_a * h_ab) / det;
    a -= da;
    b -= db;
    if (std::abs(da) < 1e-10 && std::abs(db) < 1e-10) break;
  }
  if (!(a >= kMinPlattSlope)) a = kMinPlattSlope;
  return PlattScaling{a, b};
}

/// Applies the shared map per class and renormalizes onto the simplex.
inline std::vector<double> calibrated_probabilities(
    const std::vector<double>& scores, const PlattScaling& map) {
  std::vector<double> p(scores.size());
  double total = 0.0;
  for (std::size_t c = 0; c < scores.size(); ++c) {
    p[c] = map(scores[c]);
    total += p[c];
  }
  for (double& v : p) v /= total;
  return p;
}

}  // namespace sedkit
