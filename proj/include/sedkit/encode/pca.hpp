#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sedkit/io/binary.hpp"
#include "sedkit/types.hpp"

namespace sedkit {

struct PcaModel {
  std::uint32_t input_dim = 0;
  std::uint32_t retained = 0;  // r
  std::vector<double> mean;                // input_dim
  std::vector<double> components;          // r x input_dim row-major, orthonormal
  std::vector<double> explained_variance;  // per retained component, descending
  double total_variance = 0.0;
  double variance_target = 0.95;
  bool rank_deficient = false;  // target unreachable, kept all nonzero components

  double explained_ratio() const {
    double s = 0.0;
    for (double v : explained_variance) s += v;
    return total_variance > 0.0 ? s / total_variance : 0.0;
  }
};

/// Mean-centered eigendecomposition keeping the smallest component count
/// whose cumulative explained variance reaches the target. When the input
/// spans fewer directions than that, all nonzero-variance components are
/// kept and the model is flagged rank-deficient.
inline PcaModel fit_pca(const DataMatrix& vectors, double variance_target = 0.95) {
  if (vectors.rows < 2) throw DataError("pca needs at least 2 vectors");
  if (variance_target <= 0.0 || variance_target > 1.0)
    throw ConfigError("pca variance target must be in (0, 1]");

  const std::size_t n = vectors.rows;
  const std::size_t d = vectors.cols;

  PcaModel model;
  model.input_dim = static_cast<std::uint32_t>(d);
  model.variance_target = variance_target;
  model.mean.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = vectors.row(i);
    for (std::size_t j = 0; j < d; ++j) model.mean[j] += row[j];
  }
  for (double& m : model.mean) m /= static_cast<double>(n);

  Eigen::MatrixXd centered(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j)
      centered(i, j) = vectors.at(i, j) - model.mean[j];

  const double denom = static_cast<double>(n - 1);
  model.total_variance = centered.squaredNorm() / denom;

  Eigen::VectorXd eigenvalues;   // variance per component, descending
  Eigen::MatrixXd eigenvectors;  // one component per column

  if (d <= n) {
    Eigen::MatrixXd cov = centered.transpose() * centered / denom;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    eigenvalues = solver.eigenvalues().reverse();
    eigenvectors = solver.eigenvectors().rowwise().reverse();
  } else {
    // gram trick for wide data: eigenvectors of X X^T lift to X^T u
    Eigen::MatrixXd gram = centered * centered.transpose() / denom;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    Eigen::VectorXd vals = solver.eigenvalues().reverse();
    Eigen::MatrixXd vecs = solver.eigenvectors().rowwise().reverse();
    eigenvalues = vals;
    eigenvectors.resize(d, vals.size());
    for (Eigen::Index c = 0; c < vals.size(); ++c) {
      Eigen::VectorXd lifted = centered.transpose() * vecs.col(c);
      const double norm = lifted.norm();
      eigenvectors.col(c) = norm > 0.0 ? (lifted / norm).eval() : lifted;
    }
  }

  const double eps = std::max(1e-12, eigenvalues.size() > 0
                                         ? std::abs(eigenvalues(0)) * 1e-10
                                         : 0.0);
  const double target_var = variance_target * model.total_variance;
  double cum = 0.0;
  std::uint32_t r = 0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    if (eigenvalues(i) <= eps) break;
    cum += eigenvalues(i);
    ++r;
    if (cum >= target_var) break;
  }
  if (r == 0) throw DataError("pca input has zero variance");
  model.rank_deficient = cum < target_var;

  model.retained = r;
  model.components.resize(static_cast<std::size_t>(r) * d);
  model.explained_variance.resize(r);
  for (std::uint32_t c = 0; c < r; ++c) {
    model.explained_variance[c] = eigenvalues(c);
    for (std::size_t j = 0; j < d; ++j)
      model.components[static_cast<std::size_t>(c) * d + j] = eigenvectors(j, c);
  }
  return model;
}

/// Projects onto the retained components and L2-normalizes (the zero
/// projection stays zero).
inline FeatureVector apply_pca(const FeatureVector& input, const PcaModel& model,
                               std::string name = "pca") {
  if (input.dim != model.input_dim)
    throw DataError("pca input dimension mismatch: " + std::to_string(input.dim) +
                    " vs " + std::to_string(model.input_dim));
  const std::vector<double> x = input.to_dense();
  std::vector<double> out(model.retained, 0.0);
  for (std::uint32_t c = 0; c < model.retained; ++c) {
    const double* comp = model.components.data() +
                         static_cast<std::size_t>(c) * model.input_dim;
    double acc = 0.0;
    for (std::uint32_t j = 0; j < model.input_dim; ++j)
      acc += (x[j] - model.mean[j]) * comp[j];
    out[c] = acc;
  }
  FeatureVector v = FeatureVector::dense(std::move(name), std::move(out));
  v.l2_normalize();
  return v;
}

inline constexpr std::uint32_t kPcaFormatVersion = 1;

inline void save_pca(const PcaModel& model, const std::filesystem::path& path) {
  BinaryWriter w(path);
  w.magic("SEDP", kPcaFormatVersion);
  w.u32(model.input_dim);
  w.u32(model.retained);
  w.f64(model.total_variance);
  w.f64(model.variance_target);
  w.u8(model.rank_deficient ? 1 : 0);
  w.vec_f64(model.mean);
  w.vec_f64(model.components);
  w.vec_f64(model.explained_variance);
  w.close();
}

inline PcaModel load_pca(const std::filesystem::path& path) {
  BinaryReader r(path);
  if (r.magic("SEDP") != kPcaFormatVersion)
    throw DataError("unsupported pca model version in " + path.string());
  PcaModel model;
  model.input_dim = r.u32();
  model.retained = r.u32();
  model.total_variance = r.f64();
  model.variance_target = r.f64();
  model.rank_deficient = r.u8() != 0;
  model.mean = r.vec_f64();
  model.components = r.vec_f64();
  model.explained_variance = r.vec_f64();
  return model;
}

}  // namespace sedkit
