#include "wepa/decode.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace wepa {

std::vector<std::uint8_t> binary_expand(double z, unsigned precision) {
  if (!(z >= 0.0 && z < 1.0)) {
    throw std::invalid_argument("binary_expand: z must lie in [0, 1)");
  }
  if (precision > 63) throw std::invalid_argument("binary_expand: precision > 63");
  auto t = static_cast<std::uint64_t>(
      std::floor(std::ldexp(z, static_cast<int>(precision))));
  std::vector<std::uint8_t> bits(precision);
  for (unsigned i = 0; i < precision; ++i) {
    bits[i] = static_cast<std::uint8_t>((t >> i) & 1U);
  }
  return bits;
}

double bits_to_unit(std::span<const std::uint8_t> bits) {
  double z = 0.0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] > 1) throw std::invalid_argument("bits_to_unit: bit not 0/1");
    if (bits[i]) z += std::ldexp(1.0, static_cast<int>(i));
  }
  return std::ldexp(z, -static_cast<int>(bits.size()));
}

Token gamma_exp_min(std::span<const double> mu, std::span<const double> pi) {
  if (mu.size() != pi.size() || mu.empty()) {
    throw std::invalid_argument("gamma: noise and distribution sizes differ");
  }
  std::size_t best = pi.size();
  double best_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < pi.size(); ++j) {
    if (!(mu[j] >= 0.0 && mu[j] < 1.0)) {
      throw std::invalid_argument("gamma: mu must lie in [0, 1)");
    }
    if (!(pi[j] > 0.0)) continue;
    const double ratio = mu[j] == 0.0 ? 0.0 : pi[j] / std::log(mu[j]);
    if (ratio < best_ratio) {
      best_ratio = ratio;
      best = j;
    }
  }
  if (best == pi.size()) throw std::invalid_argument("gamma: distribution has no mass");
  return static_cast<Token>(best);
}

GenerationTrace generate_watermarked_from(const ModelSpec& model,
                                          const KeyAutomaton& key,
                                          std::span<const Token> prompt,
                                          std::size_t m, State initial, Rng& rng) {
  if (model.vocab_size() != key.vocab_size()) {
    throw std::invalid_argument("generate: model and key vocabularies differ");
  }
  if (initial >= key.lambda()) throw std::out_of_range("generate: bad initial state");
  GenerationTrace trace;
  trace.tokens.reserve(m);
  trace.states.reserve(m);
  trace.noises.reserve(m);
  TokenSeq context(prompt.begin(), prompt.end());
  State q = initial;
  for (std::size_t i = 0; i < m; ++i) {
    q = transition(key, q, rng);
    NoiseVector xi = state_noise(key, q, rng);
    const Token y = gamma_exp_min(xi.mu, next_dist(model, context));
    context.push_back(y);
    trace.tokens.push_back(y);
    trace.states.push_back(q);
    trace.noises.push_back(std::move(xi));
  }
  return trace;
}

GenerationTrace generate_watermarked(const ModelSpec& model, const KeyAutomaton& key,
                                     std::span<const Token> prompt, std::size_t m,
                                     Rng& rng) {
  const State initial = sample_initial(key, rng);
  return generate_watermarked_from(model, key, prompt, m, initial, rng);
}

std::set<TokenSeq> enumerate_watermarked_outputs(const ModelSpec& model,
                                                 const KeyAutomaton& key,
                                                 std::span<const Token> prompt,
                                                 std::size_t m) {
  if (model.vocab_size() != key.vocab_size()) {
    throw std::invalid_argument("enumerate: model and key vocabularies differ");
  }
  const unsigned free_bits = key.precision() - key.bitwidth();
  const std::size_t v = key.vocab_size();
  if (free_bits * v > 16) throw std::invalid_argument("enumerate: too many free bits");
  const std::uint64_t combos = std::uint64_t{1} << (free_bits * v);
  const double work = static_cast<double>(key.lambda()) *
                      std::pow(static_cast<double>(key.degree() * combos),
                               static_cast<double>(m));
  if (work > 5e7) throw std::invalid_argument("enumerate: instance too large");

  std::set<TokenSeq> outputs;
  TokenSeq context(prompt.begin(), prompt.end());
  TokenSeq produced;
  const double unit = std::ldexp(1.0, -static_cast<int>(key.precision()));
  const std::uint64_t mask = (std::uint64_t{1} << free_bits) - 1;

  std::function<void(State, std::size_t)> walk = [&](State q, std::size_t step) {
    if (step == m) {
      outputs.insert(produced);
      return;
    }
    const auto pi = next_dist(model, context);
    for (State next : key.successors(q)) {
      const auto base = key.noise_row(next);
      for (std::uint64_t combo = 0; combo < combos; ++combo) {
        std::vector<double> mu = base;
        for (std::size_t j = 0; j < v; ++j) {
          mu[j] += static_cast<double>((combo >> (j * free_bits)) & mask) * unit;
        }
        const Token y = gamma_exp_min(mu, pi);
        context.push_back(y);
        produced.push_back(y);
        walk(next, step + 1);
        context.pop_back();
        produced.pop_back();
      }
    }
  };
  for (State q0 = 0; q0 < key.lambda(); ++q0) walk(q0, 0);
  return outputs;
}

}  // namespace wepa
