#include "wepa/key.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wepa {

void KeyParams::validate() const {
  if (lambda == 0) throw std::invalid_argument("key: lambda must be >= 1");
  if (degree == 0) throw std::invalid_argument("key: degree must be >= 1");
  // A single state may loop to itself; otherwise successors must be distinct.
  if (!(degree < lambda || (lambda == 1 && degree == 1))) {
    throw std::invalid_argument("key: degree must be < lambda");
  }
  if (vocab_size == 0) throw std::invalid_argument("key: empty vocabulary");
  if (bitwidth == 0 || bitwidth > precision) {
    throw std::invalid_argument("key: need 1 <= bitwidth <= precision");
  }
  if (precision > kFloatBits) {
    throw std::invalid_argument("key: precision above " +
                                std::to_string(kFloatBits) + " bits");
  }
}

KeyAutomaton::KeyAutomaton(KeyParams params) : params_(params) {
  params_.validate();
}

KeyAutomaton::KeyAutomaton(KeyParams params, std::vector<double> noise)
    : params_(params) {
  params_.validate();
  if (noise.size() != params_.lambda * params_.vocab_size) {
    throw std::invalid_argument("key: noise matrix must be lambda x vocab_size");
  }
  const double scale = std::ldexp(1.0, static_cast<int>(params_.bitwidth));
  for (double v : noise) {
    const double t = v * scale;
    if (!(v >= 0.0) || t >= scale || t != std::floor(t)) {
      throw std::invalid_argument("key: noise entry not on the b-bit grid");
    }
  }
  noise_ = std::move(noise);
}

double seeded_noise(std::uint64_t seed, unsigned bitwidth, State state,
                    Token token) {
  const std::uint64_t h = derive_seed(seed, state, token);
  return std::ldexp(static_cast<double>(h >> (64 - bitwidth)),
                    -static_cast<int>(bitwidth));
}

double KeyAutomaton::noise(State state, Token token) const {
  if (noise_) return (*noise_)[state * params_.vocab_size + token];
  return seeded_noise(params_.seed, params_.bitwidth, state, token);
}

std::vector<double> KeyAutomaton::noise_row(State state) const {
  std::vector<double> row(params_.vocab_size);
  for (Token j = 0; j < row.size(); ++j) row[j] = noise(state, j);
  return row;
}

std::vector<State> KeyAutomaton::successors(State state) const {
  std::vector<State> out;
  out.reserve(params_.degree);
  for (std::size_t k = 1; k <= params_.degree; ++k) {
    out.push_back(static_cast<State>((state + k) % params_.lambda));
  }
  return out;
}

KeyAutomaton gen_key(std::size_t lambda, std::size_t degree, std::size_t vocab_size,
                     unsigned bitwidth, unsigned precision, std::uint64_t seed) {
  return KeyAutomaton(KeyParams{lambda, degree, vocab_size, bitwidth, precision, seed});
}

State sample_initial(const KeyAutomaton& key, Rng& rng) {
  return static_cast<State>(uniform_below(rng, key.lambda()));
}

State transition(const KeyAutomaton& key, State state, Rng& rng) {
  if (state >= key.lambda()) throw std::out_of_range("key: state out of range");
  const auto step = 1 + uniform_below(rng, key.degree());
  return static_cast<State>((state + step) % key.lambda());
}

NoiseVector state_noise(const KeyAutomaton& key, State state, Rng& rng) {
  if (state >= key.lambda()) throw std::out_of_range("key: state out of range");
  NoiseVector xi{key.noise_row(state), key.precision()};
  const unsigned free_bits = key.precision() - key.bitwidth();
  if (free_bits == 0) return xi;
  const std::uint64_t range = std::uint64_t{1} << free_bits;
  for (double& mu : xi.mu) {
    mu += std::ldexp(static_cast<double>(uniform_below(rng, range)),
                     -static_cast<int>(key.precision()));
  }
  return xi;
}

}  // namespace wepa
