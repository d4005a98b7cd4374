#pragma once

#include <cmath>
#include <map>
#include <string>

#include "sedkit/text/vocabulary.hpp"
#include "sedkit/types.hpp"

namespace sedkit {

/// Natural term frequency, logged inverse document frequency, cosine
/// normalization. Out-of-vocabulary tokens are ignored; an empty or all-OOV
/// token list yields the zero vector.
inline FeatureVector tfidf_vector(const TokenList& tokens,
                                  const Vocabulary& vocab,
                                  std::string name = "tfidf") {
  std::map<std::uint32_t, double> tf;
  for (const auto& tok : tokens) {
    auto it = vocab.index.find(tok);
    if (it != vocab.index.end()) tf[it->second] += 1.0;
  }
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
  indices.reserve(tf.size());
  values.reserve(tf.size());
  const double d = static_cast<double>(vocab.corpus_size);
  for (const auto& [term_idx, count] : tf) {
    const double df = static_cast<double>(vocab.document_frequency[term_idx]);
    const double weight = count * std::log(d / df);
    if (weight != 0.0) {
      indices.push_back(term_idx);
      values.push_back(weight);
    }
  }
  FeatureVector v = FeatureVector::sparse_from(std::move(name), vocab.size(),
                                               std::move(indices),
                                               std::move(values));
  v.l2_normalize();
  return v;
}

}  // namespace sedkit
