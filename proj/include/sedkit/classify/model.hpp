#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "sedkit/classify/calibration.hpp"
#include "sedkit/classify/folds.hpp"
#include "sedkit/classify/linear_svm.hpp"
#include "sedkit/classify/rbf_svm.hpp"
#include "sedkit/classify/rusboost.hpp"
#include "sedkit/io/binary.hpp"
#include "sedkit/parallel.hpp"
#include "sedkit/random.hpp"
#include "sedkit/types.hpp"

namespace sedkit {

enum class ClassifierKind : std::uint8_t { linear_svm = 0, rbf_svm = 1, rusboost = 2 };

inline const char* classifier_kind_name(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::linear_svm: return "linear_svm";
    case ClassifierKind::rbf_svm: return "rbf_svm";
    case ClassifierKind::rusboost: return "rusboost";
  }
  return "unknown";
}

inline ClassifierKind classifier_kind_from_name(const std::string& name) {
  if (name == "linear_svm") return ClassifierKind::linear_svm;
  if (name == "rbf_svm") return ClassifierKind::rbf_svm;
  if (name == "rusboost") return ClassifierKind::rusboost;
  throw ConfigError("unknown classifier kind: " + name);
}

struct ClassifierConfig {
  ClassifierKind kind = ClassifierKind::linear_svm;
  double c = 1.0;
  double gamma = 0.5;
  std::uint32_t rounds = 100;
  int tree_depth = 3;
  double tol = 1e-4;      // linear solver duality gap
  double rbf_tol = 1e-3;
  std::uint64_t seed = 1;

  std::string canonical() const {
    std::string s = classifier_kind_name(kind);
    switch (kind) {
      case ClassifierKind::linear_svm:
        s += " c=" + std::to_string(c);
        break;
      case ClassifierKind::rbf_svm:
        s += " c=" + std::to_string(c) + " gamma=" + std::to_string(gamma);
        break;
      case ClassifierKind::rusboost:
        s += " rounds=" + std::to_string(rounds) +
             " depth=" + std::to_string(tree_depth);
        break;
    }
    return s + " seed=" + std::to_string(seed);
  }
};

/// A fitted classifier over a named class set. Binary problems use one
/// underlying solver; larger class sets are one-vs-rest (each class scored
/// against the pooled rest, so relabeling the other classes among
/// themselves cannot change a class's score). Probability outputs require
/// calibration and always rank identically to the raw scores.
class TrainedModel {
 public:
  TrainedModel() = default;

  static TrainedModel fit(const DataMatrix& x, const std::vector<int>& y,
                          std::vector<std::string> class_names,
                          const ClassifierConfig& cfg, unsigned workers = 1) {
    if (x.rows != y.size()) throw DataError("feature/label row count mismatch");
    if (!x.all_finite())
      throw DataError("training features contain non-finite values");
    const int k = static_cast<int>(class_names.size());
    if (k < 2) throw DataError("training needs at least 2 classes");
    std::set<int> present;
    for (int label : y) {
      if (label < 0 || label >= k) throw DataError("label outside the class set");
      present.insert(label);
    }
    if (present.size() < 2)
      throw DataError("training set contains a single class");

    TrainedModel model;
    model.cfg_ = cfg;
    model.class_names_ = std::move(class_names);
    model.dim_ = x.cols;

    switch (cfg.kind) {
      case ClassifierKind::linear_svm: {
        const int heads = k == 2 ? 1 : k;
        model.linear_.resize(heads);
        parallel_for(heads, workers, [&](std::size_t c) {
          LinearSvmOptions opt;
          opt.c = cfg.c;
          opt.tol = cfg.tol;
          opt.seed = mix_seed(cfg.seed, c);
          model.linear_[c] = train_linear_svm_binary(
              x, detail_binary_targets(y, k == 2 ? 1 : static_cast<int>(c)), opt);
        });
        break;
      }
      case ClassifierKind::rbf_svm: {
        if (cfg.gamma <= 0.0) throw ConfigError("rbf gamma must be positive");
        const int heads = k == 2 ? 1 : k;
        const std::vector<double> d2 = pairwise_squared_distances(x);
        model.rbf_.resize(heads);
        parallel_for(heads, workers, [&](std::size_t c) {
          RbfSvmOptions opt;
          opt.c = cfg.c;
          opt.gamma = cfg.gamma;
          opt.tol = cfg.rbf_tol;
          model.rbf_[c] = train_rbf_svm_binary(
              x, detail_binary_targets(y, k == 2 ? 1 : static_cast<int>(c)), opt,
              &d2);
        });
        break;
      }
      case ClassifierKind::rusboost: {
        RusBoostOptions opt;
        opt.rounds = cfg.rounds;
        opt.tree_depth = cfg.tree_depth;
        opt.seed = cfg.seed;
        model.boost_ = train_rusboost(x, y, k, opt);
        break;
      }
    }
    return model;
  }

  const std::vector<std::string>& class_names() const { return class_names_; }
  std::size_t num_classes() const { return class_names_.size(); }
  std::size_t input_dim() const { return dim_; }
  const ClassifierConfig& config() const { return cfg_; }
  bool calibrated() const { return calibrated_; }
  const PlattScaling& calibration() const { return platt_; }

  std::vector<double> decision_scores(const double* x) const {
    const std::size_t k = num_classes();
    std::vector<double> scores(k, 0.0);
    switch (cfg_.kind) {
      case ClassifierKind::linear_svm:
        if (k == 2) {
          const double s = linear_[0].decision(x, dim_);
          scores[0] = -s;
          scores[1] = s;
        } else {
          for (std::size_t c = 0; c < k; ++c)
            scores[c] = linear_[c].decision(x, dim_);
        }
        break;
      case ClassifierKind::rbf_svm:
        if (k == 2) {
          const double s = rbf_[0].decision(x, dim_);
          scores[0] = -s;
          scores[1] = s;
        } else {
          for (std::size_t c = 0; c < k; ++c)
            scores[c] = rbf_[c].decision(x, dim_);
        }
        break;
      case ClassifierKind::rusboost:
        scores = boost_.scores(x);
        break;
    }
    return scores;
  }

  /// Argmax of the per-class scores; exact ties go to the lowest class index.
  int predict_row(const double* x) const {
    const std::vector<double> scores = decision_scores(x);
    int best = 0;
    for (std::size_t c = 1; c < scores.size(); ++c)
      if (scores[c] > scores[best]) best = static_cast<int>(c);
    return best;
  }

  std::vector<int> predict_labels(const DataMatrix& x) const {
    check_dim(x);
    std::vector<int> out(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) out[i] = predict_row(x.row(i));
    return out;
  }

  /// Fits the shared probability map on out-of-fold decision scores from a
  /// stratified k-fold split of the given training data.
  void calibrate(const DataMatrix& x, const std::vector<int>& y, int folds = 5,
                 unsigned workers = 1) {
    check_dim(x);
    if (x.rows != y.size()) throw DataError("feature/label row count mismatch");
    const std::vector<int> fold =
        stratified_fold_assignment(y, folds, mix_seed(cfg_.seed, 0x9a17));
    std::vector<double> scores;
    std::vector<int> targets;
    for (int f = 0; f < folds; ++f) {
      std::vector<std::size_t> train_rows, held_rows;
      for (std::size_t i = 0; i < x.rows; ++i)
        (fold[i] == f ? held_rows : train_rows).push_back(i);
      if (held_rows.empty()) continue;
      std::set<int> present;
      for (std::size_t i : train_rows) present.insert(y[i]);
      if (present.size() < 2) continue;  // degenerate fold, skip

      DataMatrix sub(train_rows.size(), x.cols);
      std::vector<int> sub_y(train_rows.size());
      for (std::size_t r = 0; r < train_rows.size(); ++r) {
        std::copy_n(x.row(train_rows[r]), x.cols, sub.row(r));
        sub_y[r] = y[train_rows[r]];
      }
      ClassifierConfig fold_cfg = cfg_;
      fold_cfg.seed = mix_seed(cfg_.seed, 0xf01d + f);
      TrainedModel fold_model =
          fit(sub, sub_y, class_names_, fold_cfg, workers);
      for (std::size_t i : held_rows) {
        const std::vector<double> s = fold_model.decision_scores(x.row(i));
        for (std::size_t c = 0; c < s.size(); ++c) {
          scores.push_back(s[c]);
          targets.push_back(y[i] == static_cast<int>(c) ? 1 : 0);
        }
      }
    }
    if (scores.empty())
      throw DataError("calibration produced no out-of-fold scores");
    platt_ = fit_platt(scores, targets);
    calibrated_ = true;
  }

  std::vector<double> predict_probability_row(const double* x) const {
    if (!calibrated_)
      throw DataError("model is not calibrated; fit probabilities first");
    return calibrated_probabilities(decision_scores(x), platt_);
  }

  std::vector<std::vector<double>> predict_probabilities(const DataMatrix& x) const {
    check_dim(x);
    std::vector<std::vector<double>> out(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i)
      out[i] = predict_probability_row(x.row(i));
    return out;
  }

  void save(const std::filesystem::path& path) const {
    BinaryWriter w(path);
    w.magic("SEDM", kFormatVersion);
    w.u8(static_cast<std::uint8_t>(cfg_.kind));
    w.u64(class_names_.size());
    for (const auto& name : class_names_) w.str(name);
    w.u64(dim_);
    w.f64(cfg_.c);
    w.f64(cfg_.gamma);
    w.u32(cfg_.rounds);
    w.u32(static_cast<std::uint32_t>(cfg_.tree_depth));
    w.f64(cfg_.tol);
    w.f64(cfg_.rbf_tol);
    w.u64(cfg_.seed);
    w.u8(calibrated_ ? 1 : 0);
    w.f64(platt_.slope);
    w.f64(platt_.intercept);
    switch (cfg_.kind) {
      case ClassifierKind::linear_svm:
        w.u64(linear_.size());
        for (const auto& m : linear_) {
          w.vec_f64(m.weights);
          w.f64(m.bias);
        }
        break;
      case ClassifierKind::rbf_svm:
        w.u64(rbf_.size());
        for (const auto& m : rbf_) {
          w.f64(m.gamma);
          w.f64(m.bias);
          w.u64(m.support_vectors.rows);
          w.u64(m.support_vectors.cols);
          w.vec_f64(m.support_vectors.data);
          w.vec_f64(m.coefficients);
        }
        break;
      case ClassifierKind::rusboost:
        w.u32(static_cast<std::uint32_t>(boost_.n_classes));
        w.u32(static_cast<std::uint32_t>(boost_.tree_depth));
        w.u64(boost_.learners.size());
        for (const auto& tree : boost_.learners) {
          w.u64(tree.nodes.size());
          for (const auto& node : tree.nodes) {
            w.i64(node.feature);
            w.f64(node.threshold);
            w.i64(node.left);
            w.i64(node.right);
            w.i64(node.label);
          }
        }
        w.vec_f64(boost_.alphas);
        break;
    }
    w.close();
  }

  static TrainedModel load(const std::filesystem::path& path) {
    BinaryReader r(path);
    if (r.magic("SEDM") != kFormatVersion)
      throw DataError("unsupported model version in " + path.string());
    TrainedModel model;
    model.cfg_.kind = static_cast<ClassifierKind>(r.u8());
    model.class_names_.resize(r.u64());
    for (auto& name : model.class_names_) name = r.str();
    model.dim_ = r.u64();
    model.cfg_.c = r.f64();
    model.cfg_.gamma = r.f64();
    model.cfg_.rounds = r.u32();
    model.cfg_.tree_depth = static_cast<int>(r.u32());
    model.cfg_.tol = r.f64();
    model.cfg_.rbf_tol = r.f64();
    model.cfg_.seed = r.u64();
    model.calibrated_ = r.u8() != 0;
    model.platt_.slope = r.f64();
    model.platt_.intercept = r.f64();
    switch (model.cfg_.kind) {
      case ClassifierKind::linear_svm: {
        model.linear_.resize(r.u64());
        for (auto& m : model.linear_) {
          m.weights = r.vec_f64();
          m.bias = r.f64();
        }
        break;
      }
      case ClassifierKind::rbf_svm: {
        model.rbf_.resize(r.u64());
        for (auto& m : model.rbf_) {
          m.gamma = r.f64();
          m.bias = r.f64();
          m.support_vectors.rows = r.u64();
          m.support_vectors.cols = r.u64();
          m.support_vectors.data = r.vec_f64();
          m.coefficients = r.vec_f64();
        }
        break;
      }
      case ClassifierKind::rusboost: {
        model.boost_.n_classes = static_cast<int>(r.u32());
        model.boost_.tree_depth = static_cast<int>(r.u32());
        model.boost_.learners.resize(r.u64());
        for (auto& tree : model.boost_.learners) {
          tree.nodes.resize(r.u64());
          for (auto& node : tree.nodes) {
            node.feature = static_cast<int>(r.i64());
            node.threshold = r.f64();
            node.left = static_cast<int>(r.i64());
            node.right = static_cast<int>(r.i64());
            node.label = static_cast<int>(r.i64());
          }
        }
        model.boost_.alphas = r.vec_f64();
        break;
      }
    }
    return model;
  }

 private:
  static constexpr std::uint32_t kFormatVersion = 1;

  static std::vector<int> detail_binary_targets(const std::vector<int>& y,
                                                int positive) {
    std::vector<int> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
      out[i] = y[i] == positive ? 1 : -1;
    return out;
  }

  void check_dim(const DataMatrix& x) const {
    if (x.cols != dim_)
      throw DataError("feature dimension mismatch: " + std::to_string(x.cols) +
                      " vs " + std::to_string(dim_));
  }

  ClassifierConfig cfg_;
  std::vector<std::string> class_names_;
  std::size_t dim_ = 0;
  bool calibrated_ = false;
  PlattScaling platt_;
  std::vector<LinearSvmModel> linear_;
  std::vector<RbfSvmModel> rbf_;
  RusBoostModel boost_;
};

}  // namespace sedkit
