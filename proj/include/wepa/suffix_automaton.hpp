#pragma once

// Suffix automaton of a cyclic string.
//
// Built by running the online suffix-automaton extension over s twice and then
// closing the cycle with one extra edge, so that walking `next` from the root
// spells exactly the substrings of s repeated indefinitely. Every state is
// accepting.

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "wepa/automata.hpp"

namespace wepa {

class SuffixAutomaton {
 public:
  struct Node {
    std::uint32_t length = 0;
    std::int32_t link = -1;
    std::map<Symbol, std::uint32_t> next;
  };

  SuffixAutomaton();

  void extend(Symbol c);

  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t num_states() const { return nodes_.size(); }
  std::uint32_t last() const { return last_; }

  // Adds or overwrites nodes_[from].next[c] = to.
  void set_edge(std::uint32_t from, Symbol c, std::uint32_t to);

  // Walks `next` from the root; true iff every symbol has an edge.
  bool accepts(std::span<const Symbol> word) const;

  // Direct construction, used when reading serialized automata.
  static SuffixAutomaton from_nodes(std::vector<Node> nodes);

 private:
  std::vector<Node> nodes_;
  std::uint32_t last_ = 0;
};

/// Throws std::invalid_argument on empty input.
SuffixAutomaton suffix_automaton_cyclic(std::span<const Symbol> s);

}  // namespace wepa
