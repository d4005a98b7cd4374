#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sedkit {

// ---------------------------------------------------------------- errors

/// Bad user input: unknown keys, out-of-range parameters, missing files named
/// in a config.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent data (corpus files, caches, model files).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Data error tied to a specific line of an input file.
class ParseError : public DataError {
 public:
  ParseError(const std::string& msg, std::size_t line)
      : DataError(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// ---------------------------------------------------------------- labels

enum class ClassLabel : std::uint8_t {
  non_event = 0,
  concert,
  conference,
  exhibition,
  fashion,
  protest,
  sports,
  theater_dance,
  other,
};

inline constexpr std::size_t kNumClasses = 9;

inline constexpr std::array<ClassLabel, kNumClasses> kAllLabels = {
    ClassLabel::non_event, ClassLabel::concert,       ClassLabel::conference,
    ClassLabel::exhibition, ClassLabel::fashion,      ClassLabel::protest,
    ClassLabel::sports,     ClassLabel::theater_dance, ClassLabel::other,
};

inline constexpr std::array<const char*, kNumClasses> kLabelNames = {
    "non_event", "concert", "conference", "exhibition", "fashion",
    "protest",   "sports",  "theater_dance", "other",
};

inline const char* label_name(ClassLabel label) {
  return kLabelNames[static_cast<std::size_t>(label)];
}

inline std::optional<ClassLabel> label_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kNumClasses; ++i) {
    if (name == kLabelNames[i]) return static_cast<ClassLabel>(i);
  }
  return std::nullopt;
}

inline bool is_event(ClassLabel label) { return label != ClassLabel::non_event; }

/// The eight event classes, in enum order.
inline std::vector<ClassLabel> event_labels() {
  std::vector<ClassLabel> out;
  for (ClassLabel l : kAllLabels) {
    if (is_event(l)) out.push_back(l);
  }
  return out;
}

enum class Split : std::uint8_t { development = 0, test = 1 };

inline const char* split_name(Split s) {
  return s == Split::development ? "development" : "test";
}

inline std::optional<Split> split_from_name(std::string_view name) {
  if (name == "development") return Split::development;
  if (name == "test") return Split::test;
  return std::nullopt;
}

// ---------------------------------------------------------------- vectors

/// A named dense or sparse feature vector. Sparse storage keeps sorted,
/// unique indices; dense storage leaves `indices` empty with
/// `values.size() == dim`.
struct FeatureVector {
  std::string name;
  std::size_t dim = 0;
  std::vector<std::uint32_t> indices;
  std::vector<double> values;

  bool sparse() const { return !indices.empty() || values.size() != dim; }

  static FeatureVector dense(std::string name, std::vector<double> values) {
    FeatureVector v;
    v.name = std::move(name);
    v.dim = values.size();
    v.values = std::move(values);
    return v;
  }

  static FeatureVector sparse_from(std::string name, std::size_t dim,
                                   std::vector<std::uint32_t> indices,
                                   std::vector<double> values) {
    if (indices.size() != values.size())
      throw DataError("sparse vector: index/value length mismatch");
    FeatureVector v;
    v.name = std::move(name);
    v.dim = dim;
    v.indices = std::move(indices);
    v.values = std::move(values);
    return v;
  }

  double squared_norm() const {
    double s = 0.0;
    for (double x : values) s += x * x;
    return s;
  }

  double norm() const { return std::sqrt(squared_norm()); }

  /// Scales to unit length; the zero vector is left unchanged.
  void l2_normalize() {
    const double n = norm();
    if (n > 0.0) {
      for (double& x : values) x /= n;
    }
  }

  /// Materializes a dense copy.
  std::vector<double> to_dense() const {
    if (!sparse()) return values;
    std::vector<double> out(dim, 0.0);
    for (std::size_t i = 0; i < indices.size(); ++i) out[indices[i]] = values[i];
    return out;
  }

  double at(std::size_t i) const {
    if (i >= dim) throw DataError("feature index out of range");
    if (!sparse()) return values[i];
    for (std::size_t k = 0; k < indices.size(); ++k) {
      if (indices[k] == i) return values[k];
    }
    return 0.0;
  }
};

/// Row-major dense matrix used as classifier input.
struct DataMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DataMatrix() = default;
  DataMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double* row(std::size_t r) { return data.data() + r * cols; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }
  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  bool all_finite() const {
    for (double v : data) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }
};

inline double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline double squared_distance(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace sedkit
