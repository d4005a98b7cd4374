#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sedkit/random.hpp"
#include "sedkit/types.hpp"

namespace sedkit {

/// L2-regularized hinge-loss classifier. The loss term is the per-sample
/// mean, so duplicating every training point leaves the optimum unchanged.
/// The bias is folded in as an extra always-one feature (and regularized
/// with the weights).
struct LinearSvmModel {
  std::vector<double> weights;
  double bias = 0.0;

  double decision(const double* x, std::size_t dim) const {
    return dot(weights.data(), x, std::min(dim, weights.size())) + bias;
  }
};

/// 0.5*||w||^2 + (c/n) * sum_i max(0, 1 - y_i * (w.x_i)); `w_aug` carries the
/// bias as its last component and rows are implicitly augmented with 1.
inline double hinge_objective(const DataMatrix& x, const std::vector<int>& y,
                              double c, const std::vector<double>& w_aug) {
  const std::size_t n = x.rows, d = x.cols;
  double reg = 0.0;
  for (double w : w_aug) reg += w * w;
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double margin =
        y[i] * (dot(w_aug.data(), x.row(i), d) + w_aug[d]);
    loss += std::max(0.0, 1.0 - margin);
  }
  return 0.5 * reg + c * loss / static_cast<double>(n);
}

/// Subgradient of hinge_objective at w_aug; points with margin exactly 1
/// contribute nothing (one valid subgradient choice).
inline std::vector<double> hinge_subgradient(const DataMatrix& x,
                                             const std::vector<int>& y, double c,
                                             const std::vector<double>& w_aug) {
  const std::size_t n = x.rows, d = x.cols;
  std::vector<double> g = w_aug;
  const double scale = c / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = x.row(i);
    const double margin = y[i] * (dot(w_aug.data(), row, d) + w_aug[d]);
    if (margin < 1.0) {
      for (std::size_t j = 0; j < d; ++j) g[j] -= scale * y[i] * row[j];
      g[d] -= scale * y[i];
    }
  }
  return g;
}

struct LinearSvmOptions {
  double c = 1.0;
  double tol = 1e-4;  // relative duality gap
  std::uint32_t max_epochs = 4000;
  std::uint64_t seed = 1;
};

/// Dual coordinate descent on the box-constrained dual; epochs visit
/// coordinates in a seeded random permutation, so training is deterministic
/// given the seed. Stops when the relative primal-dual gap drops below tol.
inline LinearSvmModel train_linear_svm_binary(const DataMatrix& x,
                                              const std::vector<int>& y,
                                              const LinearSvmOptions& opt) {
  const std::size_t n = x.rows, d = x.cols;
  if (n == 0) throw DataError("empty training set");
  const double u = opt.c / static_cast<double>(n);  // per-sample dual bound

  std::vector<double> q_diag(n);
  for (std::size_t i = 0; i < n; ++i)
    q_diag[i] = dot(x.row(i), x.row(i), d) + 1.0;  // +1 for the bias feature

  std::vector<double> alpha(n, 0.0);
  std::vector<double> w(d + 1, 0.0);
  Rng rng(opt.seed);

  for (std::uint32_t epoch = 0; epoch < opt.max_epochs; ++epoch) {
    auto perm = rng.permutation(n);
    for (std::size_t pi = 0; pi < n; ++pi) {
      const std::size_t i = perm[pi];
      const double* row = x.row(i);
      const double g = y[i] * (dot(w.data(), row, d) + w[d]) - 1.0;
      double pg = g;
      if (alpha[i] <= 0.0)
        pg = std::min(g, 0.0);
      else if (alpha[i] >= u)
        pg = std::max(g, 0.0);
      if (std::abs(pg) < 1e-14) continue;
      const double next = std::clamp(alpha[i] - g / q_diag[i], 0.0, u);
      const double delta = (next - alpha[i]) * y[i];
      alpha[i] = next;
      for (std::size_t j = 0; j < d; ++j) w[j] += delta * row[j];
      w[d] += delta;
    }

    double reg = 0.0;
    for (double v : w) reg += v * v;
    double hinge_sum = 0.0, alpha_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double margin = y[i] * (dot(w.data(), x.row(i), d) + w[d]);
      hinge_sum += std::max(0.0, 1.0 - margin);
      alpha_sum += alpha[i];
    }
    const double primal = 0.5 * reg + u * hinge_sum;
    const double dual = alpha_sum - 0.5 * reg;
    if (primal - dual <= opt.tol * std::max(1.0, std::abs(primal))) break;
  }

  LinearSvmModel model;
  model.weights.assign(w.begin(), w.begin() + d);
  model.bias = w[d];
  return model;
}

}  // namespace sedkit
