#pragma once

// Abstract syntax of IMP2 sentences, a parser for the fully parenthesized
// concrete syntax and the canonical printer.
//
//   P -> skip | x[N] := A | (while B do P) | (P ; P) | (if B then P else P)
//   B -> true | false | (A = A) | (A < A) | (B and B) | (B or B) | not B
//   A -> readbit | N | x[N] | (A + A) | (A - A) | (A * A)
//
// Nodes are immutable and shared; copying a Sentence is O(1).

#include "imp2/bigint.hpp"

#include <memory>
#include <string>
#include <string_view>

namespace imp2 {

struct ArithNode;
struct BoolNode;
struct StmtNode;

using ArithExpr = std::shared_ptr<const ArithNode>;
using BoolExpr = std::shared_ptr<const BoolNode>;
using Sentence = std::shared_ptr<const StmtNode>;

enum class ArithKind { ReadBit, Lit, Loc, Add, Sub, Mul };
enum class BoolKind { True, False, Eq, Lt, And, Or, Not };
enum class StmtKind { Skip, Assign, While, Seq, If };

struct ArithNode {
  ArithKind kind;
  BigInt value; // literal for Lit, location index for Loc
  ArithExpr lhs;
  ArithExpr rhs;
};

struct BoolNode {
  BoolKind kind;
  ArithExpr lhs_arith; // Eq, Lt
  ArithExpr rhs_arith;
  BoolExpr lhs; // And, Or; operand of Not in lhs
  BoolExpr rhs;
};

struct StmtNode {
  StmtKind kind;
  BigInt location; // Assign
  ArithExpr expr;  // Assign
  BoolExpr cond;   // While, If
  Sentence first;  // While body, Seq first, If then
  Sentence second; // Seq second, If else
};

namespace ast {

ArithExpr readbit();
ArithExpr lit(BigInt n);
ArithExpr loc(BigInt index);
ArithExpr add(ArithExpr l, ArithExpr r);
ArithExpr sub(ArithExpr l, ArithExpr r);
ArithExpr mul(ArithExpr l, ArithExpr r);

BoolExpr truth();
BoolExpr falsity();
BoolExpr eq(ArithExpr l, ArithExpr r);
BoolExpr lt(ArithExpr l, ArithExpr r);
BoolExpr conj(BoolExpr l, BoolExpr r);
BoolExpr disj(BoolExpr l, BoolExpr r);
BoolExpr negate(BoolExpr e);

Sentence skip();
Sentence assign(BigInt location, ArithExpr e);
Sentence loop(BoolExpr cond, Sentence body);
Sentence seq(Sentence first, Sentence second);
Sentence branch(BoolExpr cond, Sentence then_branch, Sentence else_branch);

} // namespace ast

bool equal(const ArithExpr& a, const ArithExpr& b);
bool equal(const BoolExpr& a, const BoolExpr& b);
bool equal(const Sentence& a, const Sentence& b);

/// Parses a sentence; whitespace between tokens is insignificant.
/// Throws ParseError.
Sentence parse(std::string_view text);

/// Single-line canonical rendering; parse(print(s)) is structurally s.
std::string print(const Sentence& s);
std::string print(const BoolExpr& e);
std::string print(const ArithExpr& e);

} // namespace imp2
