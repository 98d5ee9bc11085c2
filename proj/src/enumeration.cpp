#include "imp2/enumeration.hpp"

#include "imp2/error.hpp"

#include <algorithm>
#include <array>

namespace imp2 {

namespace {

BigInt triangular(const BigInt& s) { return s * (s + 1) / 2; }

// floor(cbrt(n)) by Newton iteration from above.
BigInt icbrt(const BigInt& n) {
  if (n < 8)
    return n == 0 ? 0 : 1;
  BigInt x = BigInt(1) << ((bit_length(n) + 2) / 3);
  for (;;) {
    BigInt y = (2 * x + n / (x * x)) / 3;
    if (y >= x)
      return x;
    x = y;
  }
}

// Rounds [start, end) of a union where the set of live rules is constant.
// `end` is nullopt for the final unbounded segment.
struct Segment {
  BigInt start;
  std::optional<BigInt> end;
  std::vector<std::size_t> live;
};

std::vector<Segment> segments(std::span<const RuleSize> rules) {
  std::vector<BigInt> cuts;
  for (const auto& r : rules)
    if (r)
      cuts.push_back(*r);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Segment> out;
  BigInt start = 0;
  auto live_at = [&](const BigInt& round) {
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < rules.size(); ++i)
      if (!rules[i] || *rules[i] > round)
        live.push_back(i);
    return live;
  };
  for (const auto& cut : cuts) {
    if (cut <= start)
      continue;
    out.push_back({start, cut, live_at(start)});
    start = cut;
  }
  auto tail = live_at(start);
  if (!tail.empty())
    out.push_back({start, std::nullopt, std::move(tail)});
  return out;
}

const std::array<RuleSize, 5> kSentenceRules{BigInt(1), std::nullopt,
                                             std::nullopt, std::nullopt,
                                             std::nullopt};
const std::array<RuleSize, 7> kBoolRules{BigInt(1),    BigInt(1),
                                         std::nullopt, std::nullopt,
                                         std::nullopt, std::nullopt,
                                         std::nullopt};
const std::array<RuleSize, 6> kArithRules{BigInt(1),    std::nullopt,
                                          std::nullopt, std::nullopt,
                                          std::nullopt, std::nullopt};

// Alternatives in grammar order.
enum SentenceRule : std::size_t { kSkip, kAssign, kWhile, kSeq, kIf };
enum BoolRule : std::size_t { kTrue, kFalse, kEq, kLt, kAnd, kOr, kNot };
enum ArithRule : std::size_t { kReadBit, kNumeral, kLoc, kAdd, kSub, kMul };

} // namespace

std::span<const RuleSize> sentence_rules() { return kSentenceRules; }
std::span<const RuleSize> bool_rules() { return kBoolRules; }
std::span<const RuleSize> arith_rules() { return kArithRules; }

EnumIndex pair_rank(const EnumIndex& a, const EnumIndex& b) {
  return triangular(a + b) + a;
}

std::pair<EnumIndex, EnumIndex> pair_unrank(const EnumIndex& i) {
  BigInt s = (isqrt(8 * i + 1) - 1) / 2;
  BigInt a = i - triangular(s);
  return {a, s - a};
}

EnumIndex tuple_rank(std::span<const EnumIndex> c) {
  const std::size_t k = c.size();
  if (k == 0)
    throw InvalidArgument("tuple arity must be at least 1");
  if (k == 1)
    return c[0];
  if (k == 2)
    return pair_rank(c[0], c[1]);

  BigInt sum = 0;
  for (const auto& x : c)
    sum += x;
  // Tuples of smaller sum, then lexicographic predecessors inside the layer.
  BigInt rank = binomial(sum + k - 1, static_cast<unsigned>(k));
  BigInt rest = sum;
  for (std::size_t j = 0; j + 1 < k; ++j) {
    unsigned arity = static_cast<unsigned>(k - j);
    rank += binomial(rest + arity - 1, arity - 1) -
            binomial(rest - c[j] + arity - 1, arity - 1);
    rest -= c[j];
  }
  return rank;
}

std::vector<EnumIndex> tuple_unrank(const EnumIndex& i, unsigned arity) {
  if (arity == 0)
    throw InvalidArgument("tuple arity must be at least 1");
  if (arity == 1)
    return {i};
  if (arity == 2) {
    auto [a, b] = pair_unrank(i);
    return {a, b};
  }

  auto below_layer = [&](const BigInt& s) {
    return binomial(s + arity - 1, arity);
  };
  BigInt lo;
  if (arity == 3) {
    // C(s+2, 3) ~ (s+1)^3 / 6: start at the cube root and correct.
    lo = icbrt(6 * i);
    while (lo > 0 && below_layer(lo) > i)
      --lo;
    while (below_layer(lo + 1) <= i)
      ++lo;
  } else {
    BigInt hi = 1;
    while (below_layer(hi) <= i)
      hi *= 2;
    lo = 0; // below_layer(lo) <= i < below_layer(hi)
    while (hi - lo > 1) {
      BigInt mid = (lo + hi) / 2;
      (below_layer(mid) <= i ? lo : hi) = mid;
    }
  }

  if (arity == 3) {
    // First component v leaves t = s - v for the pair; the layer prefix
    // before v holds C(s+2,2) - C(t+2,2) tuples.
    const BigInt q = i - below_layer(lo);
    const BigInt need = triangular(lo + 1) - q; // smallest t: C(t+2,2) >= need
    BigInt t = isqrt(2 * need);
    while (t > 0 && triangular(t) >= need)
      --t;
    while (triangular(t + 1) < need)
      ++t;
    const BigInt v = lo - t;
    const BigInt q2 = q - (triangular(lo + 1) - triangular(t + 1));
    return {v, q2, t - q2};
  }

  std::vector<EnumIndex> out;
  BigInt q = i - below_layer(lo);
  BigInt rest = lo;
  for (unsigned j = 0; j + 1 < arity; ++j) {
    unsigned a = arity - j;
    BigInt total = binomial(rest + a - 1, a - 1);
    auto before = [&](const BigInt& v) {
      return total - binomial(rest - v + a - 1, a - 1);
    };
    // Largest v in [0, rest] with before(v) <= q.
    BigInt vlo = 0, vhi = rest + 1;
    while (vhi - vlo > 1) {
      BigInt mid = (vlo + vhi) / 2;
      (before(mid) <= q ? vlo : vhi) = mid;
    }
    q -= before(vlo);
    rest -= vlo;
    out.push_back(vlo);
  }
  out.push_back(rest);
  return out;
}

UnionPosition union_schedule(std::span<const RuleSize> rules,
                             const EnumIndex& position) {
  BigInt remaining = position;
  for (const auto& seg : segments(rules)) {
    BigInt width = seg.live.size();
    if (!seg.end || remaining < (*seg.end - seg.start) * width) {
      BigInt round = seg.start + remaining / width;
      auto j = static_cast<std::size_t>(remaining % width);
      return {seg.live[j], round};
    }
    remaining -= (*seg.end - seg.start) * width;
  }
  throw InvalidArgument("position " + to_decimal(position) +
                        " is past the end of a finite union");
}

EnumIndex union_position(std::span<const RuleSize> rules,
                         const UnionPosition& where) {
  if (where.rule >= rules.size())
    throw InvalidArgument("no such production rule");
  const auto& size = rules[where.rule];
  if (where.inner < 0 || (size && where.inner >= *size))
    throw InvalidArgument("inner index outside the production rule");
  BigInt position = 0;
  for (const auto& seg : segments(rules)) {
    BigInt width = seg.live.size();
    if (!seg.end || where.inner < *seg.end) {
      auto it = std::find(seg.live.begin(), seg.live.end(), where.rule);
      return position + (where.inner - seg.start) * width +
             static_cast<std::size_t>(it - seg.live.begin());
    }
    position += (*seg.end - seg.start) * width;
  }
  throw InvalidArgument("inner index outside the union");
}

ArithExpr arith_unrank(const EnumIndex& n) {
  auto [rule, inner] = union_schedule(kArithRules, n);
  switch (rule) {
  case kReadBit:
    return ast::readbit();
  case kNumeral:
    return ast::lit(inner);
  case kLoc:
    return ast::loc(inner);
  default:
    break;
  }
  auto [l, r] = pair_unrank(inner);
  ArithExpr lhs = arith_unrank(l);
  ArithExpr rhs = arith_unrank(r);
  if (rule == kAdd)
    return ast::add(std::move(lhs), std::move(rhs));
  if (rule == kSub)
    return ast::sub(std::move(lhs), std::move(rhs));
  return ast::mul(std::move(lhs), std::move(rhs));
}

EnumIndex arith_rank(const ArithExpr& e) {
  UnionPosition where;
  switch (e->kind) {
  case ArithKind::ReadBit:
    where = {kReadBit, 0};
    break;
  case ArithKind::Lit:
    where = {kNumeral, e->value};
    break;
  case ArithKind::Loc:
    where = {kLoc, e->value};
    break;
  case ArithKind::Add:
  case ArithKind::Sub:
  case ArithKind::Mul: {
    std::size_t rule = e->kind == ArithKind::Add   ? kAdd
                       : e->kind == ArithKind::Sub ? kSub
                                                   : kMul;
    where = {rule, pair_rank(arith_rank(e->lhs), arith_rank(e->rhs))};
    break;
  }
  }
  return union_position(kArithRules, where);
}

BoolExpr bool_unrank(const EnumIndex& n) {
  auto [rule, inner] = union_schedule(kBoolRules, n);
  switch (rule) {
  case kTrue:
    return ast::truth();
  case kFalse:
    return ast::falsity();
  case kNot:
    return ast::negate(bool_unrank(inner));
  case kEq:
  case kLt: {
    auto [l, r] = pair_unrank(inner);
    auto lhs = arith_unrank(l);
    auto rhs = arith_unrank(r);
    return rule == kEq ? ast::eq(std::move(lhs), std::move(rhs))
                       : ast::lt(std::move(lhs), std::move(rhs));
  }
  default: {
    auto [l, r] = pair_unrank(inner);
    auto lhs = bool_unrank(l);
    auto rhs = bool_unrank(r);
    return rule == kAnd ? ast::conj(std::move(lhs), std::move(rhs))
                        : ast::disj(std::move(lhs), std::move(rhs));
  }
  }
}

EnumIndex bool_rank(const BoolExpr& e) {
  UnionPosition where;
  switch (e->kind) {
  case BoolKind::True:
    where = {kTrue, 0};
    break;
  case BoolKind::False:
    where = {kFalse, 0};
    break;
  case BoolKind::Eq:
    where = {kEq, pair_rank(arith_rank(e->lhs_arith), arith_rank(e->rhs_arith))};
    break;
  case BoolKind::Lt:
    where = {kLt, pair_rank(arith_rank(e->lhs_arith), arith_rank(e->rhs_arith))};
    break;
  case BoolKind::And:
    where = {kAnd, pair_rank(bool_rank(e->lhs), bool_rank(e->rhs))};
    break;
  case BoolKind::Or:
    where = {kOr, pair_rank(bool_rank(e->lhs), bool_rank(e->rhs))};
    break;
  case BoolKind::Not:
    where = {kNot, bool_rank(e->lhs)};
    break;
  }
  return union_position(kBoolRules, where);
}

Sentence sentence_unrank(const EnumIndex& n) {
  auto [rule, inner] = union_schedule(kSentenceRules, n);
  switch (rule) {
  case kSkip:
    return ast::skip();
  case kAssign: {
    auto [location, e] = pair_unrank(inner);
    return ast::assign(location, arith_unrank(e));
  }
  case kWhile: {
    auto [c, body] = pair_unrank(inner);
    auto cond = bool_unrank(c);
    return ast::loop(std::move(cond), sentence_unrank(body));
  }
  case kSeq: {
    auto [a, b] = pair_unrank(inner);
    auto first = sentence_unrank(a);
    return ast::seq(std::move(first), sentence_unrank(b));
  }
  default: {
    auto parts = tuple_unrank(inner, 3);
    auto cond = bool_unrank(parts[0]);
    auto then_branch = sentence_unrank(parts[1]);
    return ast::branch(std::move(cond), std::move(then_branch),
                       sentence_unrank(parts[2]));
  }
  }
}

EnumIndex sentence_rank(const Sentence& s) {
  UnionPosition where;
  switch (s->kind) {
  case StmtKind::Skip:
    where = {kSkip, 0};
    break;
  case StmtKind::Assign:
    where = {kAssign, pair_rank(s->location, arith_rank(s->expr))};
    break;
  case StmtKind::While:
    where = {kWhile, pair_rank(bool_rank(s->cond), sentence_rank(s->first))};
    break;
  case StmtKind::Seq:
    where = {kSeq, pair_rank(sentence_rank(s->first), sentence_rank(s->second))};
    break;
  case StmtKind::If: {
    std::array<EnumIndex, 3> parts{bool_rank(s->cond), sentence_rank(s->first),
                                   sentence_rank(s->second)};
    where = {kIf, tuple_rank(parts)};
    break;
  }
  }
  return union_position(kSentenceRules, where);
}

} // namespace imp2
