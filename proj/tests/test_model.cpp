#include <gtest/gtest.h>

#include <cmath>

#include "wepa/model.hpp"

namespace wepa {
namespace {

TEST(NextDist, UniformIgnoresPrefix) {
  const auto m = ModelSpec::uniform(5);
  const TokenSeq prefix{1, 4, 2};
  for (double p : next_dist(m, prefix)) EXPECT_DOUBLE_EQ(p, 0.2);
}

TEST(NextDist, CategoricalIsFixed) {
  const auto m = ModelSpec::categorical({0.4, 0.3, 0.2, 0.1});
  const TokenSeq prefix{3, 3};
  EXPECT_EQ(next_dist(m, prefix), (std::vector<double>{0.4, 0.3, 0.2, 0.1}));
}

TEST(NextDist, MarkovLearnsAlternation) {
  const TokenSeq corpus = tokenize_bytes("ababab");
  const auto m = train_markov(corpus, 256, 1, 1e-12);
  const TokenSeq prefix = tokenize_bytes("xa");
  const auto dist = next_dist(m, prefix);
  EXPECT_NEAR(dist['b'], 1.0, 1e-9);
}

TEST(NextDist, MarkovBacksOffToShorterContext) {
  const TokenSeq corpus{0, 1, 0, 1, 0, 2};
  const auto m = train_markov(corpus, 3, 1, 0.0);
  // Context {2} never precedes anything: fall back to unigram counts.
  const TokenSeq prefix{2};
  const auto dist = next_dist(m, prefix);
  EXPECT_NEAR(dist[0], 3.0 / 6.0, 1e-12);
  EXPECT_NEAR(dist[1], 2.0 / 6.0, 1e-12);
  EXPECT_NEAR(dist[2], 1.0 / 6.0, 1e-12);
}

TEST(NextDist, SmoothingAddsAlpha) {
  const TokenSeq corpus{0, 0, 0, 1};
  const auto m = train_markov(corpus, 2, 1, 0.5);
  const TokenSeq prefix{0};
  const auto dist = next_dist(m, prefix);
  // After 0: counts (2, 1) plus 0.5 each.
  EXPECT_NEAR(dist[0], 2.5 / 4.0, 1e-12);
  EXPECT_NEAR(dist[1], 1.5 / 4.0, 1e-12);
}

TEST(NextDist, RejectsOutOfVocabularyPrefix) {
  const auto m = ModelSpec::uniform(2);
  const TokenSeq prefix{2};
  EXPECT_THROW(next_dist(m, prefix), std::out_of_range);
}

TEST(ModelSpec, Validation) {
  EXPECT_THROW(ModelSpec::uniform(0), std::invalid_argument);
  EXPECT_THROW(ModelSpec::categorical({}), std::invalid_argument);
  EXPECT_THROW(ModelSpec::categorical({0.5, 0.6}), std::invalid_argument);
  EXPECT_THROW(ModelSpec::categorical({1.5, -0.5}), std::invalid_argument);
  EXPECT_THROW(ModelSpec::markov(2, 1, -1.0, {}), std::invalid_argument);
  EXPECT_THROW(ModelSpec::markov(2, 1, 0.1, {{{0, 1}, {1.0, 1.0}}}), std::invalid_argument);
  EXPECT_THROW(ModelSpec::markov(2, 1, 0.1, {{{0}, {1.0}}}), std::invalid_argument);
  EXPECT_THROW(ModelSpec::markov(2, 1, 0.1, {{{0}, {1.0, -1.0}}}), std::invalid_argument);
}

TEST(GeneratePlain, Examples) {
  EXPECT_TRUE(generate_plain(ModelSpec::uniform(3), {}, 0, 1).empty());
  EXPECT_EQ(generate_plain(ModelSpec::categorical({1.0, 0.0, 0.0}), {}, 5, 9),
            TokenSeq(5, 0));
}

TEST(GeneratePlain, UniformFrequency) {
  const auto y = generate_plain(ModelSpec::uniform(2), {}, 100'000, 42);
  const double zeros = static_cast<double>(std::count(y.begin(), y.end(), 0U));
  EXPECT_GE(zeros / 1e5, 0.49);
  EXPECT_LE(zeros / 1e5, 0.51);
}

TEST(GeneratePlain, DeterministicPerSeed) {
  const auto m = ModelSpec::categorical({0.2, 0.3, 0.5});
  EXPECT_EQ(generate_plain(m, {}, 50, 7), generate_plain(m, {}, 50, 7));
  EXPECT_NE(generate_plain(m, {}, 50, 7), generate_plain(m, {}, 50, 8));
}

TEST(Entropy, Examples) {
  EXPECT_NEAR(entropy_rate(ModelSpec::uniform(2), 10, 10, 1), 1.0, 0.01);
  EXPECT_NEAR(entropy_rate(ModelSpec::categorical({1.0, 0.0}), 10, 10, 1), 0.0, 1e-12);
  EXPECT_NEAR(entropy_rate(ModelSpec::categorical({0.5, 0.25, 0.25}), 10, 10, 1), 1.5, 0.01);
  EXPECT_THROW(entropy_rate(ModelSpec::uniform(2), 0, 10, 1), std::invalid_argument);
}

TEST(SampleCategorical, SkipsZeroMass) {
  Rng rng(5);
  const std::vector<double> p{0.0, 1.0, 0.0};
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_categorical(p, rng), 1U);
}

}  // namespace
}  // namespace wepa
