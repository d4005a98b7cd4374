#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "sedkit/types.hpp"

namespace sedkit {

/// Concatenation in declared order. Parts arrive individually normalized;
/// the concatenation itself is not re-normalized.
inline FeatureVector early_fuse(const std::vector<FeatureVector>& parts,
                                std::string name = "fused") {
  std::size_t total = 0;
  for (const auto& p : parts) total += p.dim;
  std::vector<double> values;
  values.reserve(total);
  for (const auto& p : parts) {
    const std::vector<double> dense = p.to_dense();
    values.insert(values.end(), dense.begin(), dense.end());
  }
  return FeatureVector::dense(std::move(name), std::move(values));
}

/// Aligned per-record feature vectors in a fixed declared order. Dimensions
/// are pinned by the first record; every vector must be unit length or zero.
class FeatureBundle {
 public:
  explicit FeatureBundle(std::vector<std::string> feature_names)
      : feature_names_(std::move(feature_names)),
        dims_(feature_names_.size(), 0) {
    if (feature_names_.empty())
      throw ConfigError("a feature bundle needs at least one feature");
  }

  void add_record(const std::string& id, std::vector<FeatureVector> vectors) {
    if (vectors.size() != feature_names_.size())
      throw DataError("record " + id + " carries " +
                      std::to_string(vectors.size()) + " features, expected " +
                      std::to_string(feature_names_.size()));
    for (std::size_t f = 0; f < vectors.size(); ++f) {
      if (vectors[f].name != feature_names_[f])
        throw DataError("record " + id + ": feature '" + vectors[f].name +
                        "' out of declared order (expected '" +
                        feature_names_[f] + "')");
      if (records_.empty()) {
        dims_[f] = vectors[f].dim;
      } else if (vectors[f].dim != dims_[f]) {
        throw DataError("record " + id + ": feature '" + feature_names_[f] +
                        "' has dimension " + std::to_string(vectors[f].dim) +
                        ", expected " + std::to_string(dims_[f]));
      }
      const double norm = vectors[f].norm();
      if (norm > 1e-12 && std::abs(norm - 1.0) > 1e-6)
        throw DataError("record " + id + ": feature '" + feature_names_[f] +
                        "' is neither unit length nor zero");
    }
    record_ids_.push_back(id);
    records_.push_back(std::move(vectors));
  }

  std::size_t num_records() const { return records_.size(); }
  std::size_t num_features() const { return feature_names_.size(); }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  const std::vector<std::string>& record_ids() const { return record_ids_; }

  const FeatureVector& vector(std::size_t record, std::size_t feature) const {
    return records_[record][feature];
  }

  std::size_t fused_dim() const {
    std::size_t total = 0;
    for (std::size_t d : dims_) total += d;
    return total;
  }

  FeatureVector fused(std::size_t record) const {
    return early_fuse(records_[record]);
  }

  /// One row per record holding a single feature.
  DataMatrix feature_matrix(std::size_t feature) const {
    DataMatrix m(records_.size(), dims_[feature]);
    for (std::size_t i = 0; i < records_.size(); ++i) {
      const std::vector<double> dense = records_[i][feature].to_dense();
      std::copy(dense.begin(), dense.end(), m.row(i));
    }
    return m;
  }

  /// One row per record holding the early-fusion concatenation.
  DataMatrix fused_matrix() const {
    DataMatrix m(records_.size(), fused_dim());
    for (std::size_t i = 0; i < records_.size(); ++i) {
      const FeatureVector v = fused(i);
      std::copy(v.values.begin(), v.values.end(), m.row(i));
    }
    return m;
  }

  FeatureBundle subset(const std::vector<std::size_t>& rows) const {
    FeatureBundle out(feature_names_);
    for (std::size_t r : rows) out.add_record(record_ids_[r], records_[r]);
    return out;
  }

 private:
  std::vector<std::string> feature_names_;
  std::vector<std::size_t> dims_;
  std::vector<std::string> record_ids_;
  std::vector<std::vector<FeatureVector>> records_;
};

}  // namespace sedkit
