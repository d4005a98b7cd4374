#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "sedkit/io/binary.hpp"
#include "sedkit/random.hpp"
#include "sedkit/text/preprocess.hpp"
#include "sedkit/types.hpp"

namespace sedkit {

/// Latent topic model fit by collapsed Gibbs sampling. Counts are kept so
/// unseen documents can be folded in with the word-topic statistics frozen.
struct TopicModel {
  std::uint32_t num_topics = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::uint32_t iterations = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> terms;  // lexicographic order, fixes term ids
  std::vector<std::uint64_t> word_topic;    // terms.size() x num_topics
  std::vector<std::uint64_t> topic_totals;  // num_topics
  bool more_topics_than_terms = false;

  std::unordered_map<std::string, std::uint32_t> term_index;

  void rebuild_index() {
    term_index.clear();
    for (std::uint32_t i = 0; i < terms.size(); ++i)
      term_index.emplace(terms[i], i);
  }

  std::uint64_t wt(std::uint32_t term, std::uint32_t topic) const {
    return word_topic[static_cast<std::size_t>(term) * num_topics + topic];
  }
};

inline double default_lda_alpha(std::uint32_t num_topics) {
  return 50.0 / static_cast<double>(num_topics);
}
inline constexpr double kDefaultLdaBeta = 0.01;
inline constexpr std::uint32_t kDefaultLdaIterations = 1000;

namespace detail {

inline std::uint32_t sample_from_weights(const std::vector<double>& weights,
                                         double total, Rng& rng) {
  double u = rng.uniform() * total;
  double acc = 0.0;
  for (std::uint32_t k = 0; k + 1 < weights.size(); ++k) {
    acc += weights[k];
    if (u < acc) return k;
  }
  return static_cast<std::uint32_t>(weights.size() - 1);
}

}  // namespace detail

inline TopicModel train_lda(const std::vector<TokenList>& documents,
                            std::uint32_t num_topics, double alpha, double beta,
                            std::uint32_t iterations, std::uint64_t seed) {
  if (num_topics < 2) throw ConfigError("topic count must be >= 2");
  if (alpha <= 0.0 || beta <= 0.0)
    throw ConfigError("lda smoothing parameters must be positive");
  if (documents.empty()) throw DataError("cannot train topics on an empty corpus");

  TopicModel model;
  model.num_topics = num_topics;
  model.alpha = alpha;
  model.beta = beta;
  model.iterations = iterations;
  model.seed = seed;

  std::set<std::string> term_set;
  for (const auto& doc : documents)
    for (const auto& tok : doc) term_set.insert(tok);
  model.terms.assign(term_set.begin(), term_set.end());
  model.rebuild_index();
  model.more_topics_than_terms = model.terms.size() < num_topics;

  const std::uint32_t t = num_topics;
  const std::size_t v = model.terms.size();
  model.word_topic.assign(v * t, 0);
  model.topic_totals.assign(t, 0);

  std::vector<std::vector<std::uint32_t>> doc_terms(documents.size());
  std::vector<std::vector<std::uint32_t>> doc_topics(documents.size());
  std::vector<std::vector<std::uint64_t>> doc_topic_counts(
      documents.size(), std::vector<std::uint64_t>(t, 0));

  Rng rng(seed);
  for (std::size_t d = 0; d < documents.size(); ++d) {
    doc_terms[d].reserve(documents[d].size());
    for (const auto& tok : documents[d])
      doc_terms[d].push_back(model.term_index.at(tok));
    doc_topics[d].resize(doc_terms[d].size());
    for (std::size_t i = 0; i < doc_terms[d].size(); ++i) {
      const std::uint32_t k = static_cast<std::uint32_t>(rng.uniform_index(t));
      doc_topics[d][i] = k;
      ++doc_topic_counts[d][k];
      ++model.word_topic[static_cast<std::size_t>(doc_terms[d][i]) * t + k];
      ++model.topic_totals[k];
    }
  }

  const double vbeta = static_cast<double>(v) * beta;
  std::vector<double> weights(t);
  for (std::uint32_t sweep = 0; sweep < iterations; ++sweep) {
    for (std::size_t d = 0; d < documents.size(); ++d) {
      auto& counts = doc_topic_counts[d];
      for (std::size_t i = 0; i < doc_terms[d].size(); ++i) {
        const std::uint32_t w = doc_terms[d][i];
        const std::uint32_t old_k = doc_topics[d][i];
        --counts[old_k];
        --model.word_topic[static_cast<std::size_t>(w) * t + old_k];
        --model.topic_totals[old_k];

        double total = 0.0;
        for (std::uint32_t k = 0; k < t; ++k) {
          const double val =
              (static_cast<double>(counts[k]) + alpha) *
              (static_cast<double>(model.word_topic[static_cast<std::size_t>(w) * t + k]) + beta) /
              (static_cast<double>(model.topic_totals[k]) + vbeta);
          weights[k] = val;
          total += val;
        }
        const std::uint32_t new_k = detail::sample_from_weights(weights, total, rng);
        doc_topics[d][i] = new_k;
        ++counts[new_k];
        ++model.word_topic[static_cast<std::size_t>(w) * t + new_k];
        ++model.topic_totals[new_k];
      }
    }
  }
  return model;
}

/// Folds a document into a trained model with the word-topic counts frozen;
/// returns the averaged topic distribution of the last half of the sweeps.
/// Pure: the sampling stream is derived from the model seed and the tokens.
inline std::vector<double> infer_topics(const TokenList& tokens,
                                        const TopicModel& model,
                                        std::uint32_t sweeps = 100) {
  const std::uint32_t t = model.num_topics;
  if (t == 0) throw DataError("topic model is empty");
  std::vector<std::uint32_t> ids;
  std::string key;
  for (const auto& tok : tokens) {
    auto it = model.term_index.find(tok);
    if (it != model.term_index.end()) {
      ids.push_back(it->second);
      key += tok;
      key.push_back('\n');
    }
  }
  std::vector<double> theta(t, 0.0);
  if (ids.empty()) {
    // prior only: alpha / (T * alpha)
    for (auto& x : theta) x = 1.0 / static_cast<double>(t);
    return theta;
  }

  Rng rng(mix_seed(model.seed, fnv1a(key)));
  const double vbeta = static_cast<double>(model.terms.size()) * model.beta;
  std::vector<std::uint64_t> counts(t, 0);
  std::vector<std::uint32_t> z(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    z[i] = static_cast<std::uint32_t>(rng.uniform_index(t));
    ++counts[z[i]];
  }

  const std::uint32_t averaged = std::max<std::uint32_t>(1, sweeps / 2);
  const double denom =
      static_cast<double>(ids.size()) + static_cast<double>(t) * model.alpha;
  std::vector<double> weights(t);
  std::uint32_t samples = 0;
  for (std::uint32_t sweep = 0; sweep < sweeps; ++sweep) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const std::uint32_t w = ids[i];
      --counts[z[i]];
      double total = 0.0;
      for (std::uint32_t k = 0; k < t; ++k) {
        const double val =
            (static_cast<double>(counts[k]) + model.alpha) *
            (static_cast<double>(model.wt(w, k)) + model.beta) /
            (static_cast<double>(model.topic_totals[k]) + vbeta);
        weights[k] = val;
        total += val;
      }
      z[i] = detail::sample_from_weights(weights, total, rng);
      ++counts[z[i]];
    }
    if (sweep + averaged >= sweeps) {
      for (std::uint32_t k = 0; k < t; ++k)
        theta[k] += (static_cast<double>(counts[k]) + model.alpha) / denom;
      ++samples;
    }
  }
  double sum = 0.0;
  for (auto& x : theta) {
    x /= static_cast<double>(samples);
    sum += x;
  }
  for (auto& x : theta) x /= sum;
  return theta;
}

inline constexpr std::uint32_t kTopicModelFormatVersion = 1;

inline void save_topic_model(const TopicModel& model,
                             const std::filesystem::path& path) {
  BinaryWriter w(path);
  w.magic("SEDT", kTopicModelFormatVersion);
  w.u32(model.num_topics);
  w.f64(model.alpha);
  w.f64(model.beta);
  w.u32(model.iterations);
  w.u64(model.seed);
  w.u64(model.terms.size());
  for (const auto& term : model.terms) w.str(term);
  w.u64(model.word_topic.size());
  for (std::uint64_t c : model.word_topic) w.u64(c);
  w.u64(model.topic_totals.size());
  for (std::uint64_t c : model.topic_totals) w.u64(c);
  w.close();
}

inline TopicModel load_topic_model(const std::filesystem::path& path) {
  BinaryReader r(path);
  if (r.magic("SEDT") != kTopicModelFormatVersion)
    throw DataError("unsupported topic model version in " + path.string());
  TopicModel model;
  model.num_topics = r.u32();
  model.alpha = r.f64();
  model.beta = r.f64();
  model.iterations = r.u32();
  model.seed = r.u64();
  model.terms.resize(r.u64());
  for (auto& term : model.terms) term = r.str();
  model.word_topic.resize(r.u64());
  for (auto& c : model.word_topic) c = r.u64();
  model.topic_totals.resize(r.u64());
  for (auto& c : model.topic_totals) c = r.u64();
  model.more_topics_than_terms = model.terms.size() < model.num_topics;
  model.rebuild_index();
  return model;
}

}  // namespace sedkit
