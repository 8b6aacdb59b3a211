#include <gtest/gtest.h>

#include <cmath>

#include "wepa/automata.hpp"
#include "wepa/decode.hpp"

namespace wepa {
namespace {

TEST(BinaryExpand, Examples) {
  EXPECT_EQ(binary_expand(0.0, 5), std::vector<std::uint8_t>(5, 0));
  const std::vector<std::uint8_t> bits{1, 0, 1};
  EXPECT_DOUBLE_EQ(bits_to_unit(bits), 5.0 / 8.0);
  EXPECT_DOUBLE_EQ(bits_to_unit(binary_expand(0.3, 4)), 0.25);
  EXPECT_EQ(binary_expand(5.0 / 8.0, 3), bits);
}

TEST(BinaryExpand, RoundTripOnGrid) {
  for (unsigned c = 1; c <= 10; ++c) {
    const double scale = std::ldexp(1.0, static_cast<int>(c));
    for (double t = 0; t < scale; ++t) {
      EXPECT_EQ(bits_to_unit(binary_expand(t / scale, c)), t / scale);
    }
  }
}

TEST(BinaryExpand, Errors) {
  EXPECT_THROW(binary_expand(1.0, 4), std::invalid_argument);
  EXPECT_THROW(binary_expand(-0.1, 4), std::invalid_argument);
  EXPECT_THROW(binary_expand(0.5, 64), std::invalid_argument);
  const std::vector<std::uint8_t> bad{2};
  EXPECT_THROW(bits_to_unit(bad), std::invalid_argument);
}

TEST(Gamma, Examples) {
  const std::vector<double> pi_det{1.0, 0.0};
  const std::vector<double> any{0.2, 0.99};
  EXPECT_EQ(gamma_exp_min(any, pi_det), 0U);

  const std::vector<double> pi{0.5, 0.5};
  const std::vector<double> mu{0.9, 0.1};
  EXPECT_EQ(gamma_exp_min(mu, pi), 0U);
  EXPECT_NEAR(0.5 / std::log(0.9), -4.746, 1e-3);
  EXPECT_NEAR(0.5 / std::log(0.1), -0.217, 1e-3);
}

TEST(Gamma, TiesGoToLowestIdAndZeroNoiseLoses) {
  const std::vector<double> pi{0.25, 0.25, 0.5};
  const std::vector<double> tie{0.5, 0.5, 0.0};
  EXPECT_EQ(gamma_exp_min(tie, pi), 0U);
  const std::vector<double> zeros{0.0, 0.0, 0.0};
  EXPECT_EQ(gamma_exp_min(zeros, pi), 0U);
}

TEST(Gamma, Errors) {
  const std::vector<double> pi{0.5, 0.5};
  const std::vector<double> short_mu{0.5};
  const std::vector<double> bad_mu{0.5, 1.0};
  const std::vector<double> no_mass{0.0, 0.0};
  const std::vector<double> mu{0.3, 0.4};
  EXPECT_THROW(gamma_exp_min(short_mu, pi), std::invalid_argument);
  EXPECT_THROW(gamma_exp_min(bad_mu, pi), std::invalid_argument);
  EXPECT_THROW(gamma_exp_min(mu, no_mass), std::invalid_argument);
}

TEST(Gamma, PreservesDistribution) {
  const std::vector<double> pi{0.4, 0.3, 0.2, 0.1};
  Rng rng(123);
  std::vector<double> freq(4);
  std::vector<double> mu(4);
  for (int i = 0; i < 100'000; ++i) {
    for (auto& m : mu) m = uniform01(rng);
    freq[gamma_exp_min(mu, pi)] += 1e-5;
  }
  double tv = 0.0;
  for (int j = 0; j < 4; ++j) tv += std::abs(freq[j] - pi[j]) / 2.0;
  EXPECT_LT(tv, 0.01);
}

TEST(Generate, EmptyTrace) {
  Rng rng(1);
  const auto key = gen_key(4, 1, 3, 8, 8, 1);
  const auto trace = generate_watermarked(ModelSpec::uniform(3), key, {}, 0, rng);
  EXPECT_TRUE(trace.tokens.empty());
  EXPECT_TRUE(trace.states.empty());
}

TEST(Generate, FollowsKeyPathAndDecoder) {
  Rng rng(2);
  const auto key = gen_key(16, 3, 5, 4, 7, 3);
  const auto model = ModelSpec::categorical({0.1, 0.2, 0.3, 0.25, 0.15});
  const auto trace = generate_watermarked(model, key, {}, 40, rng);
  ASSERT_EQ(trace.tokens.size(), 40U);
  for (std::size_t i = 0; i < 40; ++i) {
    if (i > 0) {
      const std::size_t step = (trace.states[i] + 16 - trace.states[i - 1]) % 16;
      EXPECT_GE(step, 1U);
      EXPECT_LE(step, 3U);
    }
    const auto& xi = trace.noises[i];
    for (Token j = 0; j < 5; ++j) {
      // Key bits fix the high-order part; free bits only add below 2^-b.
      const double stored = key.noise(trace.states[i], j);
      EXPECT_GE(xi.mu[j], stored);
      EXPECT_LT(xi.mu[j], stored + 1.0 / 16.0);
    }
    EXPECT_EQ(trace.tokens[i], gamma_exp_min(xi.mu, model.probs()));
  }
}

TEST(Generate, DeterministicFloatModeGivesOneOutputPerPath) {
  const auto key = gen_key(4, 1, 4, kFloatBits, kFloatBits, 9);
  const auto outputs = enumerate_watermarked_outputs(ModelSpec::uniform(4), key, {}, 5);
  EXPECT_LE(outputs.size(), count_paths(4, 1, 5));
}

TEST(Generate, OutputsBoundedByPathsTimesFreeBits) {
  const auto model = ModelSpec::uniform(2);
  const auto key = gen_key(3, 2, 2, 1, 2, 4);
  const auto outputs = enumerate_watermarked_outputs(model, key, {}, 3);
  // Each step: d choices of successor and 2^(free bits * |V|) noise draws.
  EXPECT_LE(outputs.size(), 3U * 8U * 8U * 8U);
  EXPECT_LE(outputs.size(), 8U);

  // Sampled outputs are always among the enumerated ones.
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    EXPECT_TRUE(outputs.contains(generate_watermarked(model, key, {}, 3, rng).tokens));
  }
}

TEST(Generate, DiversityGrowsWithDegree) {
  const auto model = ModelSpec::uniform(4);
  const auto d1 = enumerate_watermarked_outputs(model, gen_key(4, 1, 4, 2, 2, 2024), {}, 4);
  const auto d2 = enumerate_watermarked_outputs(model, gen_key(4, 2, 4, 2, 2, 2024), {}, 4);
  EXPECT_GT(d2.size(), d1.size());
  EXPECT_LE(d1.size(), count_paths(4, 1, 4));
  EXPECT_LE(d2.size(), count_paths(4, 2, 4));
}

TEST(Generate, Errors) {
  Rng rng(1);
  const auto key = gen_key(4, 1, 3, 8, 8, 1);
  EXPECT_THROW(generate_watermarked(ModelSpec::uniform(4), key, {}, 3, rng),
               std::invalid_argument);
  EXPECT_THROW(generate_watermarked_from(ModelSpec::uniform(3), key, {}, 3, 4, rng),
               std::out_of_range);
  EXPECT_THROW(enumerate_watermarked_outputs(ModelSpec::uniform(3),
                                             gen_key(4, 1, 3, 1, 53, 1), {}, 2),
               std::invalid_argument);
}

}  // namespace
}  // namespace wepa
