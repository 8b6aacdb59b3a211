#include "wepa/automata.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

namespace wepa {
namespace {

template <typename T>
std::vector<std::size_t> build_offsets(const std::vector<T>& sorted,
                                       std::size_t num_states) {
  std::vector<std::size_t> offsets(num_states + 1, 0);
  for (const auto& t : sorted) ++offsets[t.from + 1];
  for (std::size_t q = 0; q < num_states; ++q) offsets[q + 1] += offsets[q];
  return offsets;
}

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

}  // namespace

Pnfa::Pnfa(std::size_t num_states, std::size_t alphabet_size,
           std::vector<WeightedTransition> transitions,
           std::vector<double> initial, std::vector<double> final_weights,
           Mode mode)
    : num_states_(num_states),
      alphabet_size_(alphabet_size),
      transitions_(std::move(transitions)),
      initial_(std::move(initial)),
      final_(std::move(final_weights)),
      mode_(mode) {
  if (num_states_ == 0) throw std::invalid_argument("pnfa: no states");
  if (initial_.size() != num_states_ || final_.size() != num_states_) {
    throw std::invalid_argument("pnfa: initial/final size mismatch");
  }
  for (const auto& t : transitions_) {
    if (t.from >= num_states_ || t.to >= num_states_) {
      throw std::invalid_argument("pnfa: transition references unknown state");
    }
    if (t.symbol >= alphabet_size_) {
      throw std::invalid_argument("pnfa: transition references unknown symbol");
    }
    if (!is_probability(t.prob)) {
      throw std::invalid_argument("pnfa: transition probability outside [0,1]");
    }
  }
  double init_mass = 0.0;
  for (std::size_t q = 0; q < num_states_; ++q) {
    if (!is_probability(initial_[q]) || !is_probability(final_[q])) {
      throw std::invalid_argument("pnfa: state probability outside [0,1]");
    }
    init_mass += initial_[q];
  }
  if (std::abs(init_mass - 1.0) > kProbabilityTolerance) {
    throw std::invalid_argument("pnfa: initial distribution does not sum to 1");
  }

  std::sort(transitions_.begin(), transitions_.end(),
            [](const WeightedTransition& a, const WeightedTransition& b) {
              return std::tie(a.from, a.symbol, a.to) <
                     std::tie(b.from, b.symbol, b.to);
            });
  offsets_ = build_offsets(transitions_, num_states_);

  if (mode_ == Mode::kGenerative) {
    for (State q = 0; q < num_states_; ++q) {
      double mass = final_[q];
      for (const auto& t : outgoing(q)) mass += t.prob;
      if (std::abs(mass - 1.0) > kProbabilityTolerance) {
        throw std::invalid_argument("pnfa: outgoing mass of state " +
                                    std::to_string(q) + " is not 1");
      }
    }
  }
}

std::span<const WeightedTransition> Pnfa::outgoing(State q) const {
  return {transitions_.data() + offsets_[q], offsets_[q + 1] - offsets_[q]};
}

Nfa::Nfa(std::size_t num_states, std::size_t alphabet_size,
         std::vector<Transition> transitions, std::vector<State> initial,
         std::vector<State> final_states)
    : num_states_(num_states),
      alphabet_size_(alphabet_size),
      transitions_(std::move(transitions)),
      initial_(std::move(initial)),
      final_(std::move(final_states)),
      is_final_(num_states, false) {
  for (const auto& t : transitions_) {
    if (t.from >= num_states_ || t.to >= num_states_ ||
        t.symbol >= alphabet_size_) {
      throw std::invalid_argument("nfa: transition out of range");
    }
  }
  for (State q : initial_) {
    if (q >= num_states_) throw std::invalid_argument("nfa: bad initial state");
  }
  for (State q : final_) {
    if (q >= num_states_) throw std::invalid_argument("nfa: bad final state");
    is_final_[q] = true;
  }
  std::sort(transitions_.begin(), transitions_.end());
  transitions_.erase(std::unique(transitions_.begin(), transitions_.end()),
                     transitions_.end());
  std::sort(initial_.begin(), initial_.end());
  initial_.erase(std::unique(initial_.begin(), initial_.end()), initial_.end());
  std::sort(final_.begin(), final_.end());
  final_.erase(std::unique(final_.begin(), final_.end()), final_.end());
  offsets_ = build_offsets(transitions_, num_states_);
}

std::span<const Transition> Nfa::outgoing(State q) const {
  return {transitions_.data() + offsets_[q], offsets_[q + 1] - offsets_[q]};
}

Pnfa build_subordinate_pa(
    std::size_t vocab_size, unsigned bitwidth, unsigned precision,
    const std::vector<std::vector<std::uint8_t>>& key_bits) {
  if (vocab_size == 0) throw std::invalid_argument("subordinate pa: empty vocabulary");
  if (bitwidth == 0 || bitwidth > precision) {
    throw std::invalid_argument("subordinate pa: need 1 <= b <= c");
  }
  if (key_bits.size() != vocab_size) {
    throw std::invalid_argument("subordinate pa: key_bits needs one row per token");
  }
  for (const auto& row : key_bits) {
    if (row.size() != bitwidth) {
      throw std::invalid_argument("subordinate pa: key_bits row must have b bits");
    }
    for (auto bit : row) {
      if (bit > 1) throw std::invalid_argument("subordinate pa: key bit not 0/1");
    }
  }

  const std::size_t free_bits = precision - bitwidth;
  const std::size_t per_layer = bitwidth + 2 * free_bits;
  const std::size_t num_states = 1 + vocab_size * per_layer;

  // Layer i: sigma_{i,1..b} then (iota, iota-hat) pairs for bits b+1..c.
  auto sigma = [&](std::size_t layer, std::size_t j) -> State {
    return static_cast<State>(1 + layer * per_layer + j);
  };
  auto iota = [&](std::size_t layer, std::size_t j, std::uint8_t bit) -> State {
    return static_cast<State>(1 + layer * per_layer + bitwidth + 2 * j + bit);
  };

  std::vector<WeightedTransition> transitions;
  std::vector<double> initial(num_states, 0.0);
  std::vector<double> final_weights(num_states, 0.0);
  initial[0] = 1.0;

  // Exits of the previous layer, each feeding sigma_{i,1} with probability 1.
  std::vector<State> exits{0};
  for (std::size_t layer = 0; layer < vocab_size; ++layer) {
    for (State from : exits) {
      transitions.push_back({from, key_bits[layer][0], sigma(layer, 0), 1.0});
    }
    for (std::size_t j = 1; j < bitwidth; ++j) {
      transitions.push_back(
          {sigma(layer, j - 1), key_bits[layer][j], sigma(layer, j), 1.0});
    }
    exits = {sigma(layer, bitwidth - 1)};
    for (std::size_t j = 0; j < free_bits; ++j) {
      std::vector<State> next;
      for (std::uint8_t bit = 0; bit < 2; ++bit) next.push_back(iota(layer, j, bit));
      for (State from : exits) {
        for (std::uint8_t bit = 0; bit < 2; ++bit) {
          transitions.push_back({from, bit, iota(layer, j, bit), 0.5});
        }
      }
      exits = std::move(next);
    }
  }
  for (State q : exits) final_weights[q] = 1.0;

  return Pnfa(num_states, 2, std::move(transitions), std::move(initial),
              std::move(final_weights));
}

Nfa support_automaton(const Pnfa& pa) {
  std::vector<Transition> transitions;
  for (const auto& t : pa.transitions()) {
    if (t.prob > 0.0) transitions.push_back({t.from, t.symbol, t.to});
  }
  std::vector<State> initial;
  std::vector<State> final_states;
  for (State q = 0; q < pa.num_states(); ++q) {
    if (pa.initial()[q] > 0.0) initial.push_back(q);
    if (pa.final_weights()[q] > 0.0) final_states.push_back(q);
  }
  return Nfa(pa.num_states(), pa.alphabet_size(), std::move(transitions),
             std::move(initial), std::move(final_states));
}

bool nfa_accepts(const Nfa& nfa, std::span<const Symbol> input) {
  std::vector<bool> current(nfa.num_states(), false);
  for (State q : nfa.initial()) current[q] = true;
  for (Symbol a : input) {
    if (a >= nfa.alphabet_size()) {
      throw std::out_of_range("nfa: symbol " + std::to_string(a) +
                              " not in alphabet");
    }
    std::vector<bool> next(nfa.num_states(), false);
    bool any = false;
    for (State q = 0; q < nfa.num_states(); ++q) {
      if (!current[q]) continue;
      for (const auto& t : nfa.outgoing(q)) {
        if (t.symbol == a) {
          next[t.to] = true;
          any = true;
        }
      }
    }
    if (!any) return false;
    current = std::move(next);
  }
  for (State q = 0; q < nfa.num_states(); ++q) {
    if (current[q] && nfa.is_final(q)) return true;
  }
  return false;
}

std::uint64_t count_paths(std::uint64_t lambda, std::uint64_t degree,
                          std::uint64_t steps) {
  if (lambda == 0 || degree == 0) {
    throw std::invalid_argument("count_paths: lambda and degree must be >= 1");
  }
  if (degree == 1) return lambda;
  std::uint64_t total = lambda;
  for (std::uint64_t i = 0; i < steps; ++i) {
    if (__builtin_mul_overflow(total, degree, &total)) {
      throw std::overflow_error("count_paths: result exceeds 64 bits");
    }
  }
  return total;
}

}  // namespace wepa
