#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "sedkit/random.hpp"
#include "sedkit/text/ilr.hpp"
#include "sedkit/text/lda.hpp"
#include "test_util.hpp"

using namespace sedkit;
using sedkit::testing::TempDir;

namespace {

// Two disjoint vocabularies; topic inference should separate the groups.
std::vector<TokenList> two_topic_corpus(std::size_t docs_per_group,
                                        std::size_t doc_len, std::uint64_t seed) {
  const std::vector<std::string> group_a = {"violin", "cello", "symphony",
                                            "orchestra", "concerto"};
  const std::vector<std::string> group_b = {"goalkeeper", "stadium", "penalty",
                                            "defender", "league"};
  Rng rng(seed);
  std::vector<TokenList> docs;
  for (std::size_t d = 0; d < 2 * docs_per_group; ++d) {
    const auto& pool = d < docs_per_group ? group_a : group_b;
    TokenList doc;
    for (std::size_t i = 0; i < doc_len; ++i)
      doc.push_back(pool[rng.uniform_index(pool.size())]);
    docs.push_back(doc);
  }
  return docs;
}

TEST(Lda, SeparatesDisjointVocabularies) {
  auto docs = two_topic_corpus(20, 12, 7);
  TopicModel model = train_lda(docs, 2, 25.0, 0.01, 200, 42);

  // dominant-topic purity >= 0.9 across the corpus
  int majority_a = 0, majority_b = 0;
  std::vector<int> dominant(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    auto theta = infer_topics(docs[d], model);
    dominant[d] = theta[0] > theta[1] ? 0 : 1;
  }
  for (std::size_t d = 0; d < 20; ++d) majority_a += dominant[d] == dominant[0];
  for (std::size_t d = 20; d < 40; ++d) majority_b += dominant[d] == dominant[20];
  EXPECT_NE(dominant[0], dominant[20]);
  EXPECT_GE(majority_a, 18);
  EXPECT_GE(majority_b, 18);
}

TEST(Lda, DeterministicGivenSeed) {
  auto docs = two_topic_corpus(8, 6, 3);
  TopicModel a = train_lda(docs, 3, 16.0, 0.01, 50, 99);
  TopicModel b = train_lda(docs, 3, 16.0, 0.01, 50, 99);
  EXPECT_EQ(a.word_topic, b.word_topic);
  EXPECT_EQ(a.topic_totals, b.topic_totals);

  auto ta = infer_topics(docs[0], a);
  auto tb = infer_topics(docs[0], b);
  EXPECT_EQ(ta, tb);
}

TEST(Lda, SingleDocumentCorpusStillValid) {
  std::vector<TokenList> docs = {{"alpha", "bravo", "alpha"}};
  TopicModel model = train_lda(docs, 2, 25.0, 0.01, 20, 1);
  auto theta = infer_topics(docs[0], model);
  double sum = std::accumulate(theta.begin(), theta.end(), 0.0);
  EXPECT_NEAR(sum, 1.0, 1e-9);
}

TEST(Lda, MoreTopicsThanTermsWarnsButProceeds) {
  std::vector<TokenList> docs = {{"alpha", "bravo"}};
  TopicModel model = train_lda(docs, 5, 10.0, 0.01, 10, 1);
  EXPECT_TRUE(model.more_topics_than_terms);
}

TEST(Lda, EmptyCorpusRejected) {
  EXPECT_THROW(train_lda({}, 2, 25.0, 0.01, 10, 1), DataError);
}

TEST(InferTopics, EmptyTokenListGivesUniformPrior) {
  auto docs = two_topic_corpus(5, 6, 2);
  TopicModel model = train_lda(docs, 4, 12.5, 0.01, 30, 5);
  auto theta = infer_topics({}, model);
  ASSERT_EQ(theta.size(), 4u);
  for (double x : theta) EXPECT_DOUBLE_EQ(x, 0.25);
}

TEST(InferTopics, OutputOnSimplexAndStrictlyPositive) {
  auto docs = two_topic_corpus(10, 8, 11);
  TopicModel model = train_lda(docs, 3, 16.6, 0.01, 60, 17);
  for (const auto& doc : docs) {
    auto theta = infer_topics(doc, model);
    double sum = std::accumulate(theta.begin(), theta.end(), 0.0);
    EXPECT_NEAR(sum, 1.0, 1e-9);
    for (double x : theta) EXPECT_GT(x, 0.0);
  }
}

TEST(InferTopics, DominantComponentForExclusiveWords) {
  auto docs = two_topic_corpus(25, 14, 23);
  TopicModel model = train_lda(docs, 2, 0.5, 0.01, 300, 31);
  TokenList probe = {"violin", "cello", "symphony", "orchestra",
                     "concerto", "violin", "cello", "symphony",
                     "orchestra", "concerto", "violin", "cello"};
  auto theta = infer_topics(probe, model);
  EXPECT_GT(*std::max_element(theta.begin(), theta.end()), 0.8);
}

TEST(TopicModel, SaveLoadRoundTrip) {
  TempDir dir("lda");
  auto docs = two_topic_corpus(6, 5, 4);
  TopicModel model = train_lda(docs, 3, 16.0, 0.02, 25, 77);
  save_topic_model(model, dir.file("topics.bin"));
  TopicModel again = load_topic_model(dir.file("topics.bin"));
  EXPECT_EQ(model.word_topic, again.word_topic);
  EXPECT_EQ(model.terms, again.terms);
  EXPECT_EQ(model.seed, again.seed);
  EXPECT_DOUBLE_EQ(model.alpha, again.alpha);
  // loaded model infers identically
  EXPECT_EQ(infer_topics(docs[1], model), infer_topics(docs[1], again));
}

TEST(Ilr, UniformSimplexMapsToExactZero) {
  for (std::size_t t : {2u, 3u, 7u, 500u}) {
    std::vector<double> x(t, 1.0 / static_cast<double>(t));
    auto y = ilr_transform(x);
    ASSERT_EQ(y.size(), t - 1);
    for (double v : y) EXPECT_EQ(v, 0.0);
  }
}

TEST(Ilr, TwoComponentHandValue) {
  auto y = ilr_transform({0.8, 0.2});
  ASSERT_EQ(y.size(), 1u);
  EXPECT_NEAR(y[0], std::sqrt(0.5) * std::log(4.0), 1e-12);
  EXPECT_NEAR(y[0], 0.9803, 1e-4);
}

// Independent inverse: build the orthonormal balance basis explicitly,
// reconstruct clr coordinates, close with softmax.
std::vector<double> ilr_inverse_oracle(const std::vector<double>& y) {
  const std::size_t t = y.size() + 1;
  std::vector<double> clr(t, 0.0);
  for (std::size_t j = 1; j < t; ++j) {
    const double a = std::sqrt(1.0 / static_cast<double>(j * (j + 1)));
    for (std::size_t i = 0; i < j; ++i) clr[i] += y[j - 1] * a;
    clr[j] += y[j - 1] * (-a * static_cast<double>(j));
  }
  double max_c = *std::max_element(clr.begin(), clr.end());
  double sum = 0.0;
  std::vector<double> x(t);
  for (std::size_t i = 0; i < t; ++i) {
    x[i] = std::exp(clr[i] - max_c);
    sum += x[i];
  }
  for (auto& v : x) v /= sum;
  return x;
}

TEST(Ilr, RoundTripThroughIndependentInverse) {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t t = 2 + rng.uniform_index(12);
    std::vector<double> x(t);
    double sum = 0.0;
    for (auto& v : x) {
      v = 0.05 + rng.uniform();
      sum += v;
    }
    for (auto& v : x) v /= sum;
    auto back = ilr_inverse_oracle(ilr_transform(x));
    for (std::size_t i = 0; i < t; ++i) EXPECT_NEAR(back[i], x[i], 1e-9);
  }
}

TEST(Ilr, RejectsNonPositiveComponents) {
  EXPECT_THROW(ilr_transform({0.5, 0.5, 0.0}), DataError);
  EXPECT_THROW(ilr_transform({1.2, -0.2}), DataError);
}

TEST(Ilr, DimensionContract) {
  std::vector<double> x(500, 1.0 / 500.0);
  EXPECT_EQ(ilr_transform(x).size(), 499u);
}

}  // namespace
