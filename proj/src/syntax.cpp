#include "imp2/syntax.hpp"

#include "imp2/error.hpp"

#include <cctype>
#include <variant>
#include <vector>

namespace imp2 {

namespace ast {

namespace {

ArithExpr arith(ArithKind k, BigInt v = 0, ArithExpr l = {}, ArithExpr r = {}) {
  return std::make_shared<const ArithNode>(
      ArithNode{k, std::move(v), std::move(l), std::move(r)});
}

BoolExpr boolean(BoolKind k, ArithExpr la, ArithExpr ra, BoolExpr l,
                 BoolExpr r) {
  return std::make_shared<const BoolNode>(BoolNode{
      k, std::move(la), std::move(ra), std::move(l), std::move(r)});
}

Sentence stmt(StmtKind k, BigInt location, ArithExpr e, BoolExpr c,
              Sentence first, Sentence second) {
  return std::make_shared<const StmtNode>(
      StmtNode{k, std::move(location), std::move(e), std::move(c),
               std::move(first), std::move(second)});
}

} // namespace

ArithExpr readbit() {
  static const ArithExpr node = arith(ArithKind::ReadBit);
  return node;
}
ArithExpr lit(BigInt n) { return arith(ArithKind::Lit, std::move(n)); }
ArithExpr loc(BigInt index) { return arith(ArithKind::Loc, std::move(index)); }
ArithExpr add(ArithExpr l, ArithExpr r) {
  return arith(ArithKind::Add, 0, std::move(l), std::move(r));
}
ArithExpr sub(ArithExpr l, ArithExpr r) {
  return arith(ArithKind::Sub, 0, std::move(l), std::move(r));
}
ArithExpr mul(ArithExpr l, ArithExpr r) {
  return arith(ArithKind::Mul, 0, std::move(l), std::move(r));
}

BoolExpr truth() {
  static const BoolExpr node = boolean(BoolKind::True, {}, {}, {}, {});
  return node;
}
BoolExpr falsity() {
  static const BoolExpr node = boolean(BoolKind::False, {}, {}, {}, {});
  return node;
}
BoolExpr eq(ArithExpr l, ArithExpr r) {
  return boolean(BoolKind::Eq, std::move(l), std::move(r), {}, {});
}
BoolExpr lt(ArithExpr l, ArithExpr r) {
  return boolean(BoolKind::Lt, std::move(l), std::move(r), {}, {});
}
BoolExpr conj(BoolExpr l, BoolExpr r) {
  return boolean(BoolKind::And, {}, {}, std::move(l), std::move(r));
}
BoolExpr disj(BoolExpr l, BoolExpr r) {
  return boolean(BoolKind::Or, {}, {}, std::move(l), std::move(r));
}
BoolExpr negate(BoolExpr e) {
  return boolean(BoolKind::Not, {}, {}, std::move(e), {});
}

Sentence skip() {
  static const Sentence node = stmt(StmtKind::Skip, 0, {}, {}, {}, {});
  return node;
}
Sentence assign(BigInt location, ArithExpr e) {
  return stmt(StmtKind::Assign, std::move(location), std::move(e), {}, {}, {});
}
Sentence loop(BoolExpr cond, Sentence body) {
  return stmt(StmtKind::While, 0, {}, std::move(cond), std::move(body), {});
}
Sentence seq(Sentence first, Sentence second) {
  return stmt(StmtKind::Seq, 0, {}, {}, std::move(first), std::move(second));
}
Sentence branch(BoolExpr cond, Sentence then_branch, Sentence else_branch) {
  return stmt(StmtKind::If, 0, {}, std::move(cond), std::move(then_branch),
              std::move(else_branch));
}

} // namespace ast

bool equal(const ArithExpr& a, const ArithExpr& b) {
  if (a == b)
    return true;
  if (!a || !b || a->kind != b->kind)
    return false;
  switch (a->kind) {
  case ArithKind::ReadBit:
    return true;
  case ArithKind::Lit:
  case ArithKind::Loc:
    return a->value == b->value;
  default:
    return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
}

bool equal(const BoolExpr& a, const BoolExpr& b) {
  if (a == b)
    return true;
  if (!a || !b || a->kind != b->kind)
    return false;
  switch (a->kind) {
  case BoolKind::True:
  case BoolKind::False:
    return true;
  case BoolKind::Eq:
  case BoolKind::Lt:
    return equal(a->lhs_arith, b->lhs_arith) &&
           equal(a->rhs_arith, b->rhs_arith);
  case BoolKind::Not:
    return equal(a->lhs, b->lhs);
  default:
    return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
}

bool equal(const Sentence& a, const Sentence& b) {
  if (a == b)
    return true;
  if (!a || !b || a->kind != b->kind)
    return false;
  switch (a->kind) {
  case StmtKind::Skip:
    return true;
  case StmtKind::Assign:
    return a->location == b->location && equal(a->expr, b->expr);
  case StmtKind::While:
    return equal(a->cond, b->cond) && equal(a->first, b->first);
  case StmtKind::Seq:
    return equal(a->first, b->first) && equal(a->second, b->second);
  case StmtKind::If:
    return equal(a->cond, b->cond) && equal(a->first, b->first) &&
           equal(a->second, b->second);
  }
  return false;
}

namespace {

enum class Tok {
  End, LParen, RParen, LBracket, RBracket, Assign, Semi, Eq, Lt, Plus, Minus,
  Star, Number, Skip, While, Do, If, Then, Else, True, False, And, Or, Not,
  ReadBit, X,
};

struct Token {
  Tok kind;
  std::size_t offset;
  std::string_view text;
};

const char* describe(Tok t) {
  switch (t) {
  case Tok::End: return "end of input";
  case Tok::LParen: return "'('";
  case Tok::RParen: return "')'";
  case Tok::LBracket: return "'['";
  case Tok::RBracket: return "']'";
  case Tok::Assign: return "':='";
  case Tok::Semi: return "';'";
  case Tok::Eq: return "'='";
  case Tok::Lt: return "'<'";
  case Tok::Plus: return "'+'";
  case Tok::Minus: return "'-'";
  case Tok::Star: return "'*'";
  case Tok::Number: return "numeral";
  case Tok::Skip: return "'skip'";
  case Tok::While: return "'while'";
  case Tok::Do: return "'do'";
  case Tok::If: return "'if'";
  case Tok::Then: return "'then'";
  case Tok::Else: return "'else'";
  case Tok::True: return "'true'";
  case Tok::False: return "'false'";
  case Tok::And: return "'and'";
  case Tok::Or: return "'or'";
  case Tok::Not: return "'not'";
  case Tok::ReadBit: return "'readbit'";
  case Tok::X: return "'x'";
  }
  return "token";
}

std::string found(const Token& t) {
  if (t.kind == Tok::End)
    return "end of input";
  return "'" + std::string(t.text) + "'";
}

std::vector<Token> tokenize(std::string_view text) {
  static const std::pair<std::string_view, Tok> keywords[] = {
      {"skip", Tok::Skip},   {"while", Tok::While},     {"do", Tok::Do},
      {"if", Tok::If},       {"then", Tok::Then},       {"else", Tok::Else},
      {"true", Tok::True},   {"false", Tok::False},     {"and", Tok::And},
      {"or", Tok::Or},       {"not", Tok::Not},         {"readbit", Tok::ReadBit},
      {"x", Tok::X},
  };
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::islower(c)) {
      while (i < text.size() &&
             std::islower(static_cast<unsigned char>(text[i])))
        ++i;
      auto word = text.substr(start, i - start);
      Tok kind = Tok::End;
      for (auto& [name, k] : keywords)
        if (name == word)
          kind = k;
      if (kind == Tok::End)
        throw ParseError(start, "keyword", "'" + std::string(word) + "'");
      out.push_back({kind, start, word});
      continue;
    }
    if (std::isdigit(c)) {
      while (i < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[i])))
        ++i;
      auto digits = text.substr(start, i - start);
      if (digits.size() > 1 && digits[0] == '0')
        throw ParseError(start, "numeral without leading zeros",
                         "'" + std::string(digits) + "'");
      out.push_back({Tok::Number, start, digits});
      continue;
    }
    Tok kind;
    std::size_t len = 1;
    switch (c) {
    case '(': kind = Tok::LParen; break;
    case ')': kind = Tok::RParen; break;
    case '[': kind = Tok::LBracket; break;
    case ']': kind = Tok::RBracket; break;
    case ';': kind = Tok::Semi; break;
    case '=': kind = Tok::Eq; break;
    case '<': kind = Tok::Lt; break;
    case '+': kind = Tok::Plus; break;
    case '-': kind = Tok::Minus; break;
    case '*': kind = Tok::Star; break;
    case ':':
      if (i + 1 < text.size() && text[i + 1] == '=') {
        kind = Tok::Assign;
        len = 2;
        break;
      }
      [[fallthrough]];
    default:
      throw ParseError(start, "token", "'" + std::string(1, text[i]) + "'");
    }
    out.push_back({kind, start, text.substr(start, len)});
    i += len;
  }
  out.push_back({Tok::End, text.size(), {}});
  return out;
}

class Parser {
public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  Sentence sentence() {
    Sentence s = statement();
    if (peek().kind != Tok::End)
      fail("end of input");
    return s;
  }

private:
  using Expr = std::variant<ArithExpr, BoolExpr>;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }

  const Token& advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& expected) const {
    throw ParseError(peek().offset, expected, found(peek()));
  }

  const Token& expect(Tok kind) {
    if (peek().kind != kind)
      fail(describe(kind));
    return advance();
  }

  BigInt numeral() { return parse_decimal(expect(Tok::Number).text); }

  BigInt subscript() {
    expect(Tok::X);
    expect(Tok::LBracket);
    BigInt n = numeral();
    expect(Tok::RBracket);
    return n;
  }

  Sentence statement() {
    switch (peek().kind) {
    case Tok::Skip:
      advance();
      return ast::skip();
    case Tok::X: {
      BigInt location = subscript();
      expect(Tok::Assign);
      return ast::assign(std::move(location), arith());
    }
    case Tok::LParen:
      break;
    default:
      fail("statement");
    }
    advance();
    if (peek().kind == Tok::While) {
      advance();
      BoolExpr cond = boolean();
      expect(Tok::Do);
      Sentence body = statement();
      expect(Tok::RParen);
      return ast::loop(std::move(cond), std::move(body));
    }
    if (peek().kind == Tok::If) {
      advance();
      BoolExpr cond = boolean();
      expect(Tok::Then);
      Sentence then_branch = statement();
      expect(Tok::Else);
      Sentence else_branch = statement();
      expect(Tok::RParen);
      return ast::branch(std::move(cond), std::move(then_branch),
                         std::move(else_branch));
    }
    Sentence first = statement();
    expect(Tok::Semi);
    Sentence second = statement();
    expect(Tok::RParen);
    return ast::seq(std::move(first), std::move(second));
  }

  ArithExpr arith() {
    std::size_t at = pos_;
    Expr e = expression();
    if (auto* a = std::get_if<ArithExpr>(&e))
      return *a;
    throw ParseError(tokens_[at].offset, "arithmetic expression",
                     "boolean expression");
  }

  BoolExpr boolean() {
    std::size_t at = pos_;
    Expr e = expression();
    if (auto* b = std::get_if<BoolExpr>(&e))
      return *b;
    throw ParseError(tokens_[at].offset, "boolean expression",
                     "arithmetic expression");
  }

  // Arithmetic and boolean expressions share the "(" lead token, so both
  // are parsed by one routine and type-checked at the operator.
  Expr expression() {
    switch (peek().kind) {
    case Tok::ReadBit:
      advance();
      return ast::readbit();
    case Tok::Number:
      return ast::lit(numeral());
    case Tok::X:
      return ast::loc(subscript());
    case Tok::True:
      advance();
      return ast::truth();
    case Tok::False:
      advance();
      return ast::falsity();
    case Tok::Not:
      advance();
      return ast::negate(boolean());
    case Tok::LParen:
      break;
    default:
      fail("expression");
    }
    advance();
    std::size_t lhs_at = pos_;
    Expr lhs = expression();
    Tok op = peek().kind;
    switch (op) {
    case Tok::Plus:
    case Tok::Minus:
    case Tok::Star:
    case Tok::Eq:
    case Tok::Lt:
    case Tok::And:
    case Tok::Or:
      break;
    default:
      fail("binary operator");
    }
    advance();
    bool arith_operands = op != Tok::And && op != Tok::Or;
    if (arith_operands != std::holds_alternative<ArithExpr>(lhs))
      throw ParseError(tokens_[lhs_at].offset,
                       arith_operands ? "arithmetic expression"
                                      : "boolean expression",
                       arith_operands ? "boolean expression"
                                      : "arithmetic expression");
    Expr result;
    if (arith_operands) {
      ArithExpr l = std::get<ArithExpr>(lhs);
      ArithExpr r = arith();
      switch (op) {
      case Tok::Plus: result = ast::add(l, r); break;
      case Tok::Minus: result = ast::sub(l, r); break;
      case Tok::Star: result = ast::mul(l, r); break;
      case Tok::Eq: result = ast::eq(l, r); break;
      default: result = ast::lt(l, r); break;
      }
    } else {
      BoolExpr l = std::get<BoolExpr>(lhs);
      BoolExpr r = boolean();
      result = op == Tok::And ? ast::conj(l, r) : ast::disj(l, r);
    }
    expect(Tok::RParen);
    return result;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

void render(const ArithExpr& e, std::string& out);

void render_binary(const ArithExpr& l, const char* op, const ArithExpr& r,
                   std::string& out) {
  out += '(';
  render(l, out);
  out += op;
  render(r, out);
  out += ')';
}

void render(const ArithExpr& e, std::string& out) {
  switch (e->kind) {
  case ArithKind::ReadBit: out += "readbit"; return;
  case ArithKind::Lit: out += to_decimal(e->value); return;
  case ArithKind::Loc:
    out += "x[";
    out += to_decimal(e->value);
    out += ']';
    return;
  case ArithKind::Add: render_binary(e->lhs, " + ", e->rhs, out); return;
  case ArithKind::Sub: render_binary(e->lhs, " - ", e->rhs, out); return;
  case ArithKind::Mul: render_binary(e->lhs, " * ", e->rhs, out); return;
  }
}

void render(const BoolExpr& e, std::string& out) {
  switch (e->kind) {
  case BoolKind::True: out += "true"; return;
  case BoolKind::False: out += "false"; return;
  case BoolKind::Eq: render_binary(e->lhs_arith, " = ", e->rhs_arith, out); return;
  case BoolKind::Lt: render_binary(e->lhs_arith, " < ", e->rhs_arith, out); return;
  case BoolKind::And:
  case BoolKind::Or:
    out += '(';
    render(e->lhs, out);
    out += e->kind == BoolKind::And ? " and " : " or ";
    render(e->rhs, out);
    out += ')';
    return;
  case BoolKind::Not:
    out += "not ";
    render(e->lhs, out);
    return;
  }
}

void render(const Sentence& s, std::string& out) {
  switch (s->kind) {
  case StmtKind::Skip: out += "skip"; return;
  case StmtKind::Assign:
    out += "x[";
    out += to_decimal(s->location);
    out += "] := ";
    render(s->expr, out);
    return;
  case StmtKind::While:
    out += "(while ";
    render(s->cond, out);
    out += " do ";
    render(s->first, out);
    out += ')';
    return;
  case StmtKind::Seq:
    out += '(';
    render(s->first, out);
    out += "; ";
    render(s->second, out);
    out += ')';
    return;
  case StmtKind::If:
    out += "(if ";
    render(s->cond, out);
    out += " then ";
    render(s->first, out);
    out += " else ";
    render(s->second, out);
    out += ')';
    return;
  }
}

} // namespace

Sentence parse(std::string_view text) { return Parser(text).sentence(); }

std::string print(const Sentence& s) {
  std::string out;
  render(s, out);
  return out;
}

std::string print(const BoolExpr& e) {
  std::string out;
  render(e, out);
  return out;
}

std::string print(const ArithExpr& e) {
  std::string out;
  render(e, out);
  return out;
}

} // namespace imp2
