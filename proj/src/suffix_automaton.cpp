#include "wepa/suffix_automaton.hpp"

#include <stdexcept>

namespace wepa {

SuffixAutomaton::SuffixAutomaton() : nodes_(1) {}

void SuffixAutomaton::extend(Symbol c) {
  const auto cur = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back({nodes_[last_].length + 1, 0, {}});

  std::int32_t p = static_cast<std::int32_t>(last_);
  while (p != -1 && !nodes_[p].next.contains(c)) {
    nodes_[p].next[c] = cur;
    p = nodes_[p].link;
  }
  if (p == -1) {
    nodes_[cur].link = 0;
  } else {
    const std::uint32_t q = nodes_[p].next[c];
    if (nodes_[p].length + 1 == nodes_[q].length) {
      nodes_[cur].link = static_cast<std::int32_t>(q);
    } else {
      const auto clone = static_cast<std::uint32_t>(nodes_.size());
      Node copy{nodes_[p].length + 1, nodes_[q].link, nodes_[q].next};
      nodes_.push_back(std::move(copy));
      while (p != -1) {
        auto it = nodes_[p].next.find(c);
        if (it == nodes_[p].next.end() || it->second != q) break;
        it->second = clone;
        p = nodes_[p].link;
      }
      nodes_[q].link = static_cast<std::int32_t>(clone);
      nodes_[cur].link = static_cast<std::int32_t>(clone);
    }
  }
  last_ = cur;
}

void SuffixAutomaton::set_edge(std::uint32_t from, Symbol c, std::uint32_t to) {
  nodes_.at(from).next[c] = to;
}

bool SuffixAutomaton::accepts(std::span<const Symbol> word) const {
  std::uint32_t state = 0;
  for (Symbol c : word) {
    auto it = nodes_[state].next.find(c);
    if (it == nodes_[state].next.end()) return false;
    state = it->second;
  }
  return true;
}

SuffixAutomaton SuffixAutomaton::from_nodes(std::vector<Node> nodes) {
  if (nodes.empty()) throw std::invalid_argument("suffix automaton: no nodes");
  for (const auto& node : nodes) {
    if (node.link < -1 || node.link >= static_cast<std::int32_t>(nodes.size())) {
      throw std::invalid_argument("suffix automaton: link out of range");
    }
    for (const auto& [sym, to] : node.next) {
      if (to >= nodes.size()) {
        throw std::invalid_argument("suffix automaton: edge out of range");
      }
    }
  }
  SuffixAutomaton sam;
  sam.nodes_ = std::move(nodes);
  sam.last_ = static_cast<std::uint32_t>(sam.nodes_.size() - 1);
  return sam;
}

SuffixAutomaton suffix_automaton_cyclic(std::span<const Symbol> s) {
  if (s.empty()) throw std::invalid_argument("suffix automaton: empty string");
  SuffixAutomaton sam;
  for (Symbol c : s) sam.extend(c);
  for (Symbol c : s) sam.extend(c);

  // Close the cycle: after a full suffix of s·s, reading s_0 continues as if
  // the text were s·s·s_0, whose state is the one reached by s·s_0 from the
  // root.
  std::uint32_t wrap = 0;
  auto walk = [&](Symbol c) { wrap = sam.nodes()[wrap].next.at(c); };
  for (Symbol c : s) walk(c);
  walk(s[0]);
  sam.set_edge(sam.last(), s[0], wrap);
  return sam;
}

}  // namespace wepa
