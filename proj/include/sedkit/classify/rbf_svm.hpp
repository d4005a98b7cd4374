#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "sedkit/types.hpp"

namespace sedkit {

struct RbfSvmModel {
  double gamma = 0.0;
  double bias = 0.0;
  DataMatrix support_vectors;
  std::vector<double> coefficients;  // alpha_i * y_i per support vector

  double decision(const double* x, std::size_t dim) const {
    double f = bias;
    for (std::size_t s = 0; s < support_vectors.rows; ++s) {
      const double d2 = squared_distance(x, support_vectors.row(s), dim);
      f += coefficients[s] * std::exp(-gamma * d2);
    }
    return f;
  }
};

inline std::vector<double> pairwise_squared_distances(const DataMatrix& x) {
  const std::size_t n = x.rows;
  std::vector<double> d2(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    d2[i * n + i] = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = squared_distance(x.row(i), x.row(j), x.cols);
      d2[i * n + j] = d;
      d2[j * n + i] = d;
    }
  }
  return d2;
}

struct RbfSvmOptions {
  double c = 1.0;
  double gamma = 0.5;
  double tol = 1e-3;
  std::uint64_t max_iter = 200000;
};

/// C-SVC solved by sequential minimal optimization with maximal violating
/// pair selection. No randomness: training is fully deterministic.
/// `shared_d2` may pass a precomputed pairwise squared-distance matrix so
/// one-vs-rest reuses it across classes.
inline RbfSvmModel train_rbf_svm_binary(const DataMatrix& x,
                                        const std::vector<int>& y,
                                        const RbfSvmOptions& opt,
                                        const std::vector<double>* shared_d2 = nullptr) {
  if (opt.gamma <= 0.0) throw ConfigError("rbf gamma must be positive");
  const std::size_t n = x.rows;
  std::vector<double> own;
  if (!shared_d2) {
    own = pairwise_squared_distances(x);
    shared_d2 = &own;
  }
  std::vector<double> kernel(n * n);
  for (std::size_t i = 0; i < n * n; ++i)
    kernel[i] = std::exp(-opt.gamma * (*shared_d2)[i]);

  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // gradient of the dual objective

  const double c = opt.c;
  std::uint64_t iter = 0;
  while (iter++ < opt.max_iter) {
    // maximal violating pair
    double up_best = -std::numeric_limits<double>::infinity();
    double low_best = std::numeric_limits<double>::infinity();
    std::ptrdiff_t i = -1, j = -1;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * grad[t];
      const bool in_up = (y[t] > 0 && alpha[t] < c) || (y[t] < 0 && alpha[t] > 0);
      const bool in_low = (y[t] < 0 && alpha[t] < c) || (y[t] > 0 && alpha[t] > 0);
      if (in_up && v > up_best) {
        up_best = v;
        i = static_cast<std::ptrdiff_t>(t);
      }
      if (in_low && v < low_best) {
        low_best = v;
        j = static_cast<std::ptrdiff_t>(t);
      }
    }
    if (i < 0 || j < 0 || up_best - low_best < opt.tol) break;

    const std::size_t ii = static_cast<std::size_t>(i);
    const std::size_t jj = static_cast<std::size_t>(j);
    double a = kernel[ii * n + ii] + kernel[jj * n + jj] - 2.0 * kernel[ii * n + jj];
    if (a <= 0.0) a = 1e-12;
    // step d moves alpha_i by y_i*d and alpha_j by -y_j*d
    double d = (up_best - low_best) / a;

    // box constraints
    if (y[ii] > 0)
      d = std::min(d, c - alpha[ii]);
    else
      d = std::min(d, alpha[ii]);
    if (y[jj] > 0)
      d = std::min(d, alpha[jj]);
    else
      d = std::min(d, c - alpha[jj]);

    alpha[ii] += y[ii] * d;
    alpha[jj] -= y[jj] * d;
    const double delta_i = y[ii] * d, delta_j = -y[jj] * d;
    for (std::size_t t = 0; t < n; ++t)
      grad[t] += y[t] * (kernel[ii * n + t] * y[ii] * delta_i +
                         kernel[jj * n + t] * y[jj] * delta_j);
  }

  // bias from the KKT interval midpoint
  double m_up = -std::numeric_limits<double>::infinity();
  double m_low = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < n; ++t) {
    double e = 0.0;
    for (std::size_t s = 0; s < n; ++s)
      e += alpha[s] * y[s] * kernel[t * n + s];
    const double v = y[t] - e;
    const bool in_up = (y[t] > 0 && alpha[t] < c) || (y[t] < 0 && alpha[t] > 0);
    const bool in_low = (y[t] < 0 && alpha[t] < c) || (y[t] > 0 && alpha[t] > 0);
    if (in_up) m_up = std::max(m_up, v);
    if (in_low) m_low = std::min(m_low, v);
  }
  double bias = 0.0;
  if (std::isfinite(m_up) && std::isfinite(m_low))
    bias = 0.5 * (m_up + m_low);
  else if (std::isfinite(m_up))
    bias = m_up;
  else if (std::isfinite(m_low))
    bias = m_low;

  RbfSvmModel model;
  model.gamma = opt.gamma;
  model.bias = bias;
  std::vector<std::size_t> sv;
  for (std::size_t t = 0; t < n; ++t)
    if (alpha[t] > 1e-12) sv.push_back(t);
  model.support_vectors = DataMatrix(sv.size(), x.cols);
  model.coefficients.resize(sv.size());
  for (std::size_t s = 0; s < sv.size(); ++s) {
    std::copy_n(x.row(sv[s]), x.cols, model.support_vectors.row(s));
    model.coefficients[s] = alpha[sv[s]] * y[sv[s]];
  }
  return model;
}

}  // namespace sedkit
