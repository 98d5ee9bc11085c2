#pragma once
// Deliberately naive reimplementations used as test oracles. None of these
// share code with the library beyond the AST and BitString types.
#include "imp2/bigint.hpp"
#include "imp2/codec.hpp"
#include "imp2/enumeration.hpp"
#include "imp2/interpreter.hpp"
#include "imp2/random.hpp"
#include "imp2/syntax.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace oracle {

using imp2::BigInt;

// Simulates the round-robin union one emitted element at a time.
imp2::UnionPosition union_schedule(std::span<const imp2::RuleSize> rules,
                                   std::uint64_t position);

// Walks coordinate-sum layers in lexicographic order until index i.
std::vector<std::uint64_t> tuple_unrank(std::uint64_t i, unsigned arity);

// Sentence/expression unranking built on the two functions above.
imp2::Sentence sentence_unrank(std::uint64_t n);
imp2::ArithExpr arith_unrank(std::uint64_t n);
imp2::BoolExpr bool_unrank(std::uint64_t n);

// The n-th string of (eps, 0, 1, 00, 01, ...) by repeated successor.
class BinStrings {
public:
  const std::string& next();

private:
  std::string current_;
  bool started_ = false;
};

struct Run {
  imp2::Status status;
  std::uint64_t steps = 0;
  std::uint64_t bits = 0;
  std::string output;
};

// Tree-walking interpreter over the AST with a map memory.
Run execute(const imp2::Sentence& s, const std::string& input,
            std::uint64_t threshold, std::size_t max_value_bits = 65536);

// Random trees of bounded depth; literals reach past 64 bits.
imp2::Sentence random_sentence(imp2::Rng& rng, int depth);

std::vector<double> ranks(const std::vector<double>& v);
double pearson(const std::vector<double>& x, const std::vector<double>& y);
double spearman(const std::vector<double>& x, const std::vector<double>& y);

} // namespace oracle
