#pragma once

// Exponential-minimum decoding and watermarked generation.

#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "wepa/key.hpp"
#include "wepa/model.hpp"

namespace wepa {

/// Bits of floor(z * 2^c), index i carrying weight 2^i / 2^c (least
/// significant first). Throws std::invalid_argument unless 0 <= z < 1.
std::vector<std::uint8_t> binary_expand(double z, unsigned precision);
double bits_to_unit(std::span<const std::uint8_t> bits);

/// argmin_j pi_j / log(mu_j) over tokens with pi_j > 0; ties go to the lowest
/// id. mu_j = 0 gives ratio 0 (log 0 = -inf), the least favourable value.
/// Throws std::invalid_argument on size mismatch, mu outside [0, 1), or an
/// all-zero pi.
Token gamma_exp_min(std::span<const double> mu, std::span<const double> pi);

struct GenerationTrace {
  TokenSeq tokens;
  std::vector<State> states;
  std::vector<NoiseVector> noises;
};

/// One run of the key automaton driving the decoder: pick a start state, then
/// per step move, draw xi from the state, and decode the next token.
GenerationTrace generate_watermarked(const ModelSpec& model, const KeyAutomaton& key,
                                     std::span<const Token> prompt, std::size_t m,
                                     Rng& rng);

/// Same as above with the start state fixed instead of sampled.
GenerationTrace generate_watermarked_from(const ModelSpec& model,
                                          const KeyAutomaton& key,
                                          std::span<const Token> prompt,
                                          std::size_t m, State initial, Rng& rng);

/// Every token sequence reachable over all start states, transition choices,
/// and free noise bits. Exponential; meant for tiny keys.
std::set<TokenSeq> enumerate_watermarked_outputs(const ModelSpec& model,
                                                 const KeyAutomaton& key,
                                                 std::span<const Token> prompt,
                                                 std::size_t m);

}  // namespace wepa
