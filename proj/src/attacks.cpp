#include "wepa/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "wepa/rng.hpp"

namespace wepa {

AttackKind parse_attack_kind(std::string_view name) {
  if (name == "substitute") return AttackKind::kSubstitute;
  if (name == "delete") return AttackKind::kDelete;
  if (name == "insert") return AttackKind::kInsert;
  throw std::invalid_argument("unknown attack kind: " + std::string(name));
}

std::string_view attack_kind_name(AttackKind kind) {
  switch (kind) {
    case AttackKind::kSubstitute: return "substitute";
    case AttackKind::kDelete: return "delete";
    case AttackKind::kInsert: return "insert";
  }
  return "?";
}

TokenSeq corrupt(std::span<const Token> y, const AttackSpec& spec,
                 std::size_t vocab_size) {
  if (!(spec.fraction >= 0.0 && spec.fraction <= 1.0)) {
    throw std::invalid_argument("attack: epsilon must lie in [0, 1]");
  }
  if (vocab_size == 0) throw std::invalid_argument("attack: empty vocabulary");
  check_tokens(y, vocab_size);

  // The slack absorbs rounding in products such as 0.29 * 100.
  const auto count = static_cast<std::size_t>(
      std::floor(spec.fraction * static_cast<double>(y.size()) + 1e-9));
  Rng rng(spec.seed);
  TokenSeq out(y.begin(), y.end());

  auto pick_positions = [&] {
    std::vector<std::size_t> positions(y.size());
    std::iota(positions.begin(), positions.end(), 0);
    std::shuffle(positions.begin(), positions.end(), rng);
    positions.resize(count);
    return positions;
  };

  switch (spec.kind) {
    case AttackKind::kSubstitute:
      for (std::size_t pos : pick_positions()) {
        out[pos] = static_cast<Token>(uniform_below(rng, vocab_size));
      }
      break;
    case AttackKind::kDelete: {
      std::vector<bool> removed(y.size(), false);
      for (std::size_t pos : pick_positions()) removed[pos] = true;
      out.clear();
      for (std::size_t i = 0; i < y.size(); ++i) {
        if (!removed[i]) out.push_back(y[i]);
      }
      break;
    }
    case AttackKind::kInsert:
      for (std::size_t k = 0; k < count; ++k) {
        const auto pos = uniform_below(rng, out.size() + 1);
        const auto token = static_cast<Token>(uniform_below(rng, vocab_size));
        out.insert(out.begin() + static_cast<std::ptrdiff_t>(pos), token);
      }
      break;
  }
  return out;
}

std::size_t token_edit_distance(std::span<const Token> a, std::span<const Token> b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                         prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace wepa
