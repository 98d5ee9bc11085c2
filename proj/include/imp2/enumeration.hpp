#pragma once

// Bijection between the naturals and IMP2 sentences.
//
// Products interleave component indices by coordinate sum: tuples of equal
// sum form a layer, layers are visited in increasing sum, and inside a layer
// tuples are ordered lexicographically left to right. For arity 2 this is
// the Cantor pairing rank = T(a + b) + a.
//
// A syntactic category is the round-robin union of its production rules in
// grammar order: round t emits element t of every rule that still has one.

#include "imp2/bigint.hpp"
#include "imp2/syntax.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace imp2 {

using EnumIndex = BigInt;

/// Size of one production alternative; nullopt means infinite.
using RuleSize = std::optional<BigInt>;

struct UnionPosition {
  std::size_t rule = 0;
  EnumIndex inner;

  friend bool operator==(const UnionPosition&, const UnionPosition&) = default;
};

EnumIndex pair_rank(const EnumIndex& a, const EnumIndex& b);
std::pair<EnumIndex, EnumIndex> pair_unrank(const EnumIndex& i);

/// Throws InvalidArgument for an empty tuple.
EnumIndex tuple_rank(std::span<const EnumIndex> components);
std::vector<EnumIndex> tuple_unrank(const EnumIndex& i, unsigned arity);

/// Which rule and inner index a global position of the union denotes.
/// Throws InvalidArgument past the end of an all-finite union.
UnionPosition union_schedule(std::span<const RuleSize> rules,
                             const EnumIndex& position);
/// Inverse of union_schedule.
EnumIndex union_position(std::span<const RuleSize> rules,
                         const UnionPosition& where);

Sentence sentence_unrank(const EnumIndex& n);
EnumIndex sentence_rank(const Sentence& s);

BoolExpr bool_unrank(const EnumIndex& n);
EnumIndex bool_rank(const BoolExpr& e);

ArithExpr arith_unrank(const EnumIndex& n);
EnumIndex arith_rank(const ArithExpr& e);

/// Rule-size tables of the three categories, in grammar order.
std::span<const RuleSize> sentence_rules();
std::span<const RuleSize> bool_rules();
std::span<const RuleSize> arith_rules();

} // namespace imp2
