#pragma once

// Watermark key: the d-regular cyclic top-level automaton whose states carry
// b-bit truncated noise vectors.
//
// State i moves to one of i+1, ..., i+d (mod lambda) with probability 1/d.
// Each state fixes the top b bits of mu_j for every token j; the remaining
// c - b bits are drawn fresh whenever the state emits a noise vector.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wepa/automata.hpp"
#include "wepa/model.hpp"
#include "wepa/rng.hpp"

namespace wepa {

// "Float mode": b = c = full double mantissa.
inline constexpr unsigned kFloatBits = 53;

struct KeyParams {
  std::size_t lambda = 256;
  std::size_t degree = 1;
  std::size_t vocab_size = 0;
  unsigned bitwidth = kFloatBits;
  unsigned precision = kFloatBits;
  std::uint64_t seed = 0;

  bool float_mode() const {
    return bitwidth == kFloatBits && precision == kFloatBits;
  }
  // Throws std::invalid_argument if the parameters cannot form a key.
  void validate() const;

  bool operator==(const KeyParams&) const = default;
};

struct NoiseVector {
  std::vector<double> mu;
  unsigned precision = kFloatBits;
};

class KeyAutomaton {
 public:
  /// Noise is derived from params.seed on demand.
  explicit KeyAutomaton(KeyParams params);
  /// Expanded form: explicit lambda x vocab_size row-major noise matrix, every
  /// entry on the 2^-b grid in [0, 1 - 2^-b].
  KeyAutomaton(KeyParams params, std::vector<double> noise);

  const KeyParams& params() const { return params_; }
  std::size_t lambda() const { return params_.lambda; }
  std::size_t degree() const { return params_.degree; }
  std::size_t vocab_size() const { return params_.vocab_size; }
  unsigned bitwidth() const { return params_.bitwidth; }
  unsigned precision() const { return params_.precision; }
  bool has_explicit_noise() const { return noise_.has_value(); }

  /// The stored b-bit value v_{state, token}.
  double noise(State state, Token token) const;
  std::vector<double> noise_row(State state) const;

  /// The d successors of `state`, in order state+1 .. state+d (mod lambda).
  std::vector<State> successors(State state) const;

 private:
  KeyParams params_;
  std::optional<std::vector<double>> noise_;
};

/// Deterministic b-bit value for (seed, state, token) on the grid
/// {t / 2^b : 0 <= t < 2^b}.
double seeded_noise(std::uint64_t seed, unsigned bitwidth, State state, Token token);

KeyAutomaton gen_key(std::size_t lambda, std::size_t degree, std::size_t vocab_size,
                     unsigned bitwidth, unsigned precision, std::uint64_t seed);

State sample_initial(const KeyAutomaton& key, Rng& rng);
State transition(const KeyAutomaton& key, State state, Rng& rng);

/// mu_j = v_{state,j} + u_j / 2^c with u_j uniform on [0, 2^(c-b)).
NoiseVector state_noise(const KeyAutomaton& key, State state, Rng& rng);

}  // namespace wepa
