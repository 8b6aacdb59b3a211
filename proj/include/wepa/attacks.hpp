#pragma once

// Random edit corruption of token sequences.

#include <cstdint>
#include <span>
#include <string_view>

#include "wepa/model.hpp"

namespace wepa {

enum class AttackKind { kSubstitute, kDelete, kInsert };

struct AttackSpec {
  AttackKind kind = AttackKind::kSubstitute;
  double fraction = 0.0;  // epsilon in [0, 1]
  std::uint64_t seed = 0;
};

AttackKind parse_attack_kind(std::string_view name);
std::string_view attack_kind_name(AttackKind kind);

/// Applies floor(epsilon * |y|) edits:
///   substitute: distinct positions get a uniform token (may equal the original)
///   delete:     distinct positions are removed
///   insert:     uniform tokens are inserted at uniform positions
TokenSeq corrupt(std::span<const Token> y, const AttackSpec& spec, std::size_t vocab_size);

/// Plain unit-cost Levenshtein distance between token sequences.
std::size_t token_edit_distance(std::span<const Token> a, std::span<const Token> b);

}  // namespace wepa
