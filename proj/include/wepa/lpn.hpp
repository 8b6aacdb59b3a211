#pragma once

// Noisy sparse-parity watermark over a binary vocabulary.
//
// Positions are numbered from 1. Every position draws a Gumbel pair
// (mu_0, mu_1) from a keyed stream. At positions divisible by lambda + 1 the
// pair is reordered so that 1[mu_0 < mu_1] equals the parity of the lambda
// preceding stream indicators over the secret support, flipped with
// probability q. Tokens are decoded with the exponential-minimum rule.

#include <cstdint>
#include <span>
#include <vector>

#include "wepa/model.hpp"
#include "wepa/rng.hpp"

namespace wepa {

struct LpnKey {
  std::size_t lambda = 0;
  std::vector<std::size_t> support;  // sorted, |support| = floor(log2 lambda)
  double q = 1.0 / 3.0;
  std::uint64_t seed = 0;
};

struct GumbelPair {
  double mu0;
  double mu1;
};

struct LpnTrace {
  TokenSeq tokens;
  std::vector<std::uint8_t> parity_bits;  // one per embedded position
  std::vector<std::uint8_t> swapped;      // one per embedded position
  double mean_embedded_entropy = 0.0;     // bits, model entropy at embedded positions
};

struct LpnReport {
  std::size_t embedded_positions = 0;
  double match_rate = 0.0;
  double theta = 0.0;
  bool verdict = false;
  std::vector<std::uint8_t> swapped;  // reconstructed reordering decisions
};

/// Throws std::invalid_argument for lambda < 2 or q outside (0, 1/2).
LpnKey lpn_gen(std::size_t lambda, double q, std::uint64_t seed);

/// XOR of x over the key support. Throws on |x| != lambda.
std::uint8_t parity(const LpnKey& key, std::span<const std::uint8_t> x);

/// Stream pair at 1-based `position`.
GumbelPair lpn_stream_pair(const LpnKey& key, std::size_t position);

inline bool lpn_is_embedded(const LpnKey& key, std::size_t position) {
  return position % (key.lambda + 1) == 0;
}

/// Requires a 2-token model and m >= lambda + 1.
LpnTrace lpn_generate(const ModelSpec& model, const LpnKey& key, std::size_t m,
                      Rng& rng);

/// Match rate of y against the noiseless parity bits. Throws if y is shorter
/// than one embedding period.
LpnReport lpn_detect(std::span<const Token> y, const LpnKey& key, double theta);

inline double lpn_default_theta(std::size_t lambda) {
  return 1.0 / (2.0 * static_cast<double>(lambda));
}

/// 2 + log2(1 - q) - (3 - 4q) / (4 (1 - q)) * log2(3 - 4q), for 0 < q < 1/2.
double entropy_threshold(double q);

}  // namespace wepa
