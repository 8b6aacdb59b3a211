#include <gtest/gtest.h>

#include <algorithm>
#include <string>

#include "wepa/rng.hpp"
#include "wepa/suffix_automaton.hpp"

namespace wepa {
namespace {

std::vector<Symbol> sym(const std::string& s) { return {s.begin(), s.end()}; }

bool in_repetition(const std::string& s, const std::string& w) {
  std::string rep;
  while (rep.size() < w.size() + 2 * s.size()) rep += s;
  return rep.find(w) != std::string::npos;
}

TEST(SuffixAutomaton, SingleSymbolCycles) {
  const auto sam = suffix_automaton_cyclic(sym("a"));
  for (std::size_t n = 0; n <= 20; ++n) EXPECT_TRUE(sam.accepts(sym(std::string(n, 'a'))));
  EXPECT_FALSE(sam.accepts(sym("b")));
}

TEST(SuffixAutomaton, Abaa) {
  const auto sam = suffix_automaton_cyclic(sym("abaa"));
  EXPECT_TRUE(sam.accepts(sym("aab")));
  EXPECT_FALSE(sam.accepts(sym("bb")));
  EXPECT_LE(sam.num_states(), 16U);
}

TEST(SuffixAutomaton, WrapAcrossTheBoundary) {
  // The example string where wrapping at the last clone fails.
  const auto sam = suffix_automaton_cyclic(sym("aba"));
  EXPECT_TRUE(sam.accepts(sym("aabaab")));
  EXPECT_FALSE(sam.accepts(sym("aabaaa")));
  EXPECT_TRUE(sam.accepts(sym("baabaaba")));
}

TEST(SuffixAutomaton, MatchesSubstringOracleOnTernaryStrings) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::string s(1 + uniform_below(rng, 7), 'a');
    for (auto& c : s) c = static_cast<char>('a' + uniform_below(rng, 3));
    const auto sam = suffix_automaton_cyclic(sym(s));
    for (int q = 0; q < 200; ++q) {
      std::string w(uniform_below(rng, 3 * s.size() + 1), 'a');
      // Half the probes are real substrings, half are random.
      if (q % 2 == 0) {
        std::string rep;
        while (rep.size() < 2 * w.size() + s.size()) rep += s;
        w = rep.substr(uniform_below(rng, s.size()), w.size());
      } else {
        for (auto& c : w) c = static_cast<char>('a' + uniform_below(rng, 3));
      }
      EXPECT_EQ(sam.accepts(sym(w)), in_repetition(s, w)) << s << " / " << w;
    }
  }
}

TEST(SuffixAutomaton, StateBound) {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + uniform_below(rng, 64);
    std::vector<Symbol> s(n);
    for (auto& c : s) c = static_cast<Symbol>(uniform_below(rng, 2));
    EXPECT_LE(suffix_automaton_cyclic(s).num_states(), 4 * n);
  }
}

TEST(SuffixAutomaton, PlainExtendRecognizesSubstringsOnly) {
  SuffixAutomaton sam;
  for (char c : std::string("banana")) sam.extend(static_cast<Symbol>(c));
  EXPECT_TRUE(sam.accepts(sym("nan")));
  EXPECT_TRUE(sam.accepts(sym("banana")));
  EXPECT_FALSE(sam.accepts(sym("nab")));
  EXPECT_FALSE(sam.accepts(sym("ananab")));
  EXPECT_LE(sam.num_states(), 2 * 6 - 1U);
}

TEST(SuffixAutomaton, Errors) {
  EXPECT_THROW(suffix_automaton_cyclic({}), std::invalid_argument);
  EXPECT_THROW(SuffixAutomaton::from_nodes({}), std::invalid_argument);
  SuffixAutomaton::Node bad;
  bad.next[0] = 5;
  EXPECT_THROW(SuffixAutomaton::from_nodes({bad}), std::invalid_argument);
}

}  // namespace
}  // namespace wepa
