#include <gtest/gtest.h>

#include <numeric>

#include "wepa/attacks.hpp"

namespace wepa {
namespace {

TokenSeq ramp(std::size_t n, std::size_t vocab) {
  TokenSeq y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<Token>(i % vocab);
  return y;
}

TEST(Corrupt, ZeroFractionIsIdentity) {
  const auto y = ramp(30, 7);
  for (auto kind : {AttackKind::kSubstitute, AttackKind::kDelete, AttackKind::kInsert}) {
    EXPECT_EQ(corrupt(y, {kind, 0.0, 5}, 7), y);
  }
}

TEST(Corrupt, FullDeletionEmpties) {
  EXPECT_TRUE(corrupt(ramp(17, 3), {AttackKind::kDelete, 1.0, 1}, 3).empty());
}

TEST(Corrupt, DeleteFiftyAtTwentyPercent) {
  const auto y = ramp(50, 11);
  const auto out = corrupt(y, {AttackKind::kDelete, 0.2, 3}, 11);
  EXPECT_EQ(out.size(), 40U);
  EXPECT_LE(token_edit_distance(y, out), 10U);
}

TEST(Corrupt, LengthAccountingOnTheGrid) {
  for (std::size_t n : {1U, 10U, 50U}) {
    const auto y = ramp(n, 5);
    for (int tenth = 0; tenth <= 10; ++tenth) {
      const double eps = tenth / 10.0;
      const std::size_t count = static_cast<std::size_t>(tenth) * n / 10;
      const AttackSpec sub{AttackKind::kSubstitute, eps, 7};
      const AttackSpec del{AttackKind::kDelete, eps, 7};
      const AttackSpec ins{AttackKind::kInsert, eps, 7};
      const auto s = corrupt(y, sub, 5);
      const auto d = corrupt(y, del, 5);
      const auto i = corrupt(y, ins, 5);
      EXPECT_EQ(s.size(), n);
      EXPECT_EQ(d.size(), n - count) << n << " " << eps;
      EXPECT_EQ(i.size(), n + count) << n << " " << eps;
      const auto budget = [&](std::size_t other) {
        return static_cast<std::size_t>(
            std::ceil(eps * static_cast<double>(std::max(n, other)) - 1e-9));
      };
      EXPECT_LE(token_edit_distance(y, s), budget(s.size()));
      EXPECT_LE(token_edit_distance(y, d), budget(d.size()));
      EXPECT_LE(token_edit_distance(y, i), budget(i.size()));
      // Substitutions touch at most `count` positions.
      std::size_t changed = 0;
      for (std::size_t k = 0; k < n; ++k) changed += s[k] != y[k];
      EXPECT_LE(changed, count);
    }
  }
}

TEST(Corrupt, DeletionKeepsOrder) {
  const auto y = ramp(40, 40);
  const auto out = corrupt(y, {AttackKind::kDelete, 0.5, 9}, 40);
  EXPECT_TRUE(std::is_sorted(out.begin(), out.end()));
}

TEST(Corrupt, InsertionKeepsOriginalAsSubsequence) {
  const auto y = ramp(30, 4);
  const auto out = corrupt(y, {AttackKind::kInsert, 0.5, 2}, 4);
  std::size_t j = 0;
  for (Token t : out) {
    if (j < y.size() && t == y[j]) ++j;
  }
  EXPECT_EQ(j, y.size());
}

TEST(Corrupt, DeterministicPerSeed) {
  const auto y = ramp(50, 9);
  const AttackSpec a{AttackKind::kSubstitute, 0.3, 42};
  EXPECT_EQ(corrupt(y, a, 9), corrupt(y, a, 9));
  const AttackSpec b{AttackKind::kSubstitute, 0.3, 43};
  EXPECT_NE(corrupt(y, a, 9), corrupt(y, b, 9));
}

TEST(Corrupt, Errors) {
  const auto y = ramp(5, 3);
  EXPECT_THROW(corrupt(y, {AttackKind::kDelete, 1.5, 0}, 3), std::invalid_argument);
  EXPECT_THROW(corrupt(y, {AttackKind::kDelete, -0.1, 0}, 3), std::invalid_argument);
  EXPECT_THROW(corrupt(y, {AttackKind::kDelete, 0.1, 0}, 2), std::out_of_range);
  EXPECT_THROW(parse_attack_kind("rewrite"), std::invalid_argument);
  EXPECT_EQ(parse_attack_kind("insert"), AttackKind::kInsert);
  EXPECT_EQ(attack_kind_name(AttackKind::kSubstitute), "substitute");
}

TEST(EditDistance, Basics) {
  const TokenSeq a{1, 2, 3};
  const TokenSeq b{1, 3};
  const TokenSeq c{};
  EXPECT_EQ(token_edit_distance(a, b), 1U);
  EXPECT_EQ(token_edit_distance(a, c), 3U);
  EXPECT_EQ(token_edit_distance(c, c), 0U);
  EXPECT_EQ(token_edit_distance(TokenSeq{1, 2}, TokenSeq{2, 1}), 2U);
}

}  // namespace
}  // namespace wepa
