#pragma once

// Probabilistic and non-deterministic finite automata over small integer
// alphabets {0, ..., alphabet_size - 1}.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace wepa {

using State = std::uint32_t;
using Symbol = std::uint32_t;

inline constexpr double kProbabilityTolerance = 1e-9;

struct WeightedTransition {
  State from;
  Symbol symbol;
  State to;
  double prob;

  bool operator==(const WeightedTransition&) const = default;
};

struct Transition {
  State from;
  Symbol symbol;
  State to;

  bool operator==(const Transition&) const = default;
  auto operator<=>(const Transition&) const = default;
};

/// Probabilistic NFA (Q, Sigma, delta, pi_0, pi_f).
///
/// In generative mode every state satisfies
///   pi_f(q) + sum_{a,q'} delta(q, a, q') == 1
/// within kProbabilityTolerance. Recognizing automata skip that check but keep
/// the range and initial-mass checks. Construction throws
/// std::invalid_argument on any violation.
class Pnfa {
 public:
  enum class Mode { kGenerative, kRecognizing };

  Pnfa(std::size_t num_states, std::size_t alphabet_size,
       std::vector<WeightedTransition> transitions, std::vector<double> initial,
       std::vector<double> final_weights, Mode mode = Mode::kGenerative);

  std::size_t num_states() const { return num_states_; }
  std::size_t alphabet_size() const { return alphabet_size_; }
  Mode mode() const { return mode_; }

  // Sorted by (from, symbol, to).
  const std::vector<WeightedTransition>& transitions() const {
    return transitions_;
  }
  std::span<const WeightedTransition> outgoing(State q) const;

  const std::vector<double>& initial() const { return initial_; }
  const std::vector<double>& final_weights() const { return final_; }

 private:
  std::size_t num_states_;
  std::size_t alphabet_size_;
  std::vector<WeightedTransition> transitions_;
  std::vector<std::size_t> offsets_;  // outgoing(q) = [offsets_[q], offsets_[q+1])
  std::vector<double> initial_;
  std::vector<double> final_;
  Mode mode_;
};

class Nfa {
 public:
  Nfa(std::size_t num_states, std::size_t alphabet_size,
      std::vector<Transition> transitions, std::vector<State> initial,
      std::vector<State> final_states);

  std::size_t num_states() const { return num_states_; }
  std::size_t alphabet_size() const { return alphabet_size_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  std::span<const Transition> outgoing(State q) const;
  const std::vector<State>& initial() const { return initial_; }
  const std::vector<State>& final_states() const { return final_; }
  bool is_final(State q) const { return is_final_[q]; }

 private:
  std::size_t num_states_;
  std::size_t alphabet_size_;
  std::vector<Transition> transitions_;
  std::vector<std::size_t> offsets_;
  std::vector<State> initial_;
  std::vector<State> final_;
  std::vector<bool> is_final_;
};

/// Layered bit-emitting PA for one noise vector xi = (mu_1..mu_|V|).
///
/// Layer i emits the c bits of mu_i, most significant first. The first b bits
/// of each layer are forced to key_bits[i]; the remaining c - b bits branch
/// into a 0-path and a 1-path with probability 1/2 each. Every emitted string
/// has length vocab_size * c. State 0 is q_0; the terminal states of the last
/// layer are final.
Pnfa build_subordinate_pa(std::size_t vocab_size, unsigned bitwidth,
                          unsigned precision,
                          const std::vector<std::vector<std::uint8_t>>& key_bits);

/// Keeps exactly the positive-probability parts of a PA.
Nfa support_automaton(const Pnfa& pa);

/// Throws std::out_of_range on a symbol outside the alphabet.
bool nfa_accepts(const Nfa& nfa, std::span<const Symbol> input);

/// Number of top-level state paths of length `steps` over all start states of
/// the d-regular cyclic key automaton: lambda * degree^steps. Throws
/// std::overflow_error if the count does not fit in 64 bits.
std::uint64_t count_paths(std::uint64_t lambda, std::uint64_t degree,
                          std::uint64_t steps);

}  // namespace wepa
