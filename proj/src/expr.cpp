#include "kahler/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "kahler/errors.hpp"

namespace kahler {

namespace {

const Node& zero_node() {
  static const Node zero{};
  return zero;
}

bool is_unary(Op op) {
  switch (op) {
    case Op::Neg:
    case Op::Conj:
    case Op::Re:
    case Op::Im:
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
    case Op::Log:
      return true;
    default:
      return false;
  }
}

bool is_binary(Op op) {
  return op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div;
}

const char* function_name(Op op) {
  switch (op) {
    case Op::Conj: return "conj";
    case Op::Re: return "re";
    case Op::Im: return "im";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    default: return "";
  }
}

}  // namespace

std::string Symbol::name() const {
  return (kind == SymbolKind::Position ? "z" : "w") + std::to_string(index);
}

// ---------------------------------------------------------------------------
// Expr handle

Expr::Expr() = default;
Expr::Expr(cplx value) : Expr(literal(value)) {}
Expr::Expr(double value) : Expr(literal(cplx{value, 0.0})) {}
Expr::Expr(Symbol s) : Expr(var(s)) {}

Expr Expr::literal(cplx value) {
  auto n = std::make_shared<Node>();
  n->op = Op::Literal;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::var(Symbol s) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->symbol = s;
  return Expr(std::move(n));
}

Expr Expr::unary(Op op, Expr arg) {
  if (!is_unary(op)) throw std::logic_error("Expr::unary: not a unary op");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(arg);
  return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  if (!is_binary(op)) throw std::logic_error("Expr::binary: not a binary op");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Expr(std::move(n));
}

Expr Expr::pow(Expr base, int exponent) {
  auto n = std::make_shared<Node>();
  n->op = Op::Pow;
  n->lhs = std::move(base);
  n->exponent = exponent;
  return Expr(std::move(n));
}

Op Expr::op() const { return node_ ? node_->op : Op::Literal; }
cplx Expr::value() const { return node_ ? node_->value : cplx{}; }
Symbol Expr::symbol() const { return node_ ? node_->symbol : Symbol{}; }
int Expr::exponent() const { return node_ ? node_->exponent : 0; }
const Expr& Expr::arg() const { return (node_ ? *node_ : zero_node()).lhs; }
const Expr& Expr::lhs() const { return (node_ ? *node_ : zero_node()).lhs; }
const Expr& Expr::rhs() const { return (node_ ? *node_ : zero_node()).rhs; }

// ---------------------------------------------------------------------------
// Smart constructors

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_literal() && b.is_literal()) return Expr::literal(a.value() + b.value());
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return Expr::binary(Op::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_literal() && b.is_literal()) return Expr::literal(a.value() - b.value());
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return Expr::binary(Op::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_literal() && b.is_literal()) return Expr::literal(a.value() * b.value());
  if (a.is_zero() || b.is_zero()) return Expr{};
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  return Expr::binary(Op::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_literal() && b.is_literal() && b.value() != cplx{})
    return Expr::literal(a.value() / b.value());
  if (a.is_zero()) return Expr{};
  if (b.is_one()) return a;
  return Expr::binary(Op::Div, a, b);
}

Expr operator-(const Expr& a) {
  if (a.is_literal()) return Expr::literal(-a.value());
  if (a.op() == Op::Neg) return a.arg();
  return Expr::unary(Op::Neg, a);
}

Expr pow(const Expr& base, int exponent) {
  if (exponent == 0) return Expr(1.0);
  if (exponent == 1) return base;
  if (base.is_literal() && (exponent > 0 || base.value() != cplx{})) {
    cplx r{1.0, 0.0};
    cplx b = exponent > 0 ? base.value() : cplx{1.0, 0.0} / base.value();
    for (int k = 0; k < std::abs(exponent); ++k) r *= b;
    return Expr::literal(r);
  }
  return Expr::pow(base, exponent);
}

namespace {

Expr fold_unary(Op op, const Expr& a) {
  if (a.is_literal()) {
    const cplx v = a.value();
    switch (op) {
      case Op::Conj: return Expr::literal(std::conj(v));
      case Op::Re: return Expr::literal(std::real(v));
      case Op::Im: return Expr::literal(std::imag(v));
      case Op::Sin: return Expr::literal(std::sin(v));
      case Op::Cos: return Expr::literal(std::cos(v));
      case Op::Exp: return Expr::literal(std::exp(v));
      case Op::Log:
        if (v != cplx{}) return Expr::literal(std::log(v));
        break;
      default:
        break;
    }
  }
  return Expr::unary(op, a);
}

}  // namespace

Expr sin(const Expr& a) { return fold_unary(Op::Sin, a); }
Expr cos(const Expr& a) { return fold_unary(Op::Cos, a); }
Expr exp(const Expr& a) { return fold_unary(Op::Exp, a); }
Expr log(const Expr& a) { return fold_unary(Op::Log, a); }
Expr conj(const Expr& a) { return fold_unary(Op::Conj, a); }
Expr re(const Expr& a) { return fold_unary(Op::Re, a); }
Expr im(const Expr& a) { return fold_unary(Op::Im, a); }

// ---------------------------------------------------------------------------
// EvalPoint

EvalPoint::EvalPoint(std::vector<cplx> z, std::vector<cplx> w) : z_(std::move(z)), w_(std::move(w)) {
  if (z_.size() != w_.size()) throw DimensionMismatch("EvalPoint: z and w lengths differ");
}

EvalPoint EvalPoint::from_packed(std::span<const cplx> u) {
  if (u.size() % 2 != 0) throw DimensionMismatch("EvalPoint: packed vector has odd length");
  const auto m = u.size() / 2;
  return EvalPoint(std::vector<cplx>(u.begin(), u.begin() + m), std::vector<cplx>(u.begin() + m, u.end()));
}

cplx EvalPoint::operator[](Symbol s) const {
  const auto& v = s.kind == SymbolKind::Position ? z_ : w_;
  if (s.index < 1 || s.index > static_cast<int>(v.size()))
    throw DimensionMismatch("EvalPoint: symbol " + s.name() + " outside dimension");
  return v[s.index - 1];
}

cplx& EvalPoint::operator[](Symbol s) {
  auto& v = s.kind == SymbolKind::Position ? z_ : w_;
  if (s.index < 1 || s.index > static_cast<int>(v.size()))
    throw DimensionMismatch("EvalPoint: symbol " + s.name() + " outside dimension");
  return v[s.index - 1];
}

std::vector<cplx> EvalPoint::packed() const {
  std::vector<cplx> u(z_);
  u.insert(u.end(), w_.begin(), w_.end());
  return u;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

enum Prec : int { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_literal(cplx v, int& prec) {
  const double re = v.real();
  const double im = v.imag();
  if (im == 0.0) {
    if (std::signbit(re)) {
      prec = kUnary;
      return "-" + format_real(-re);
    }
    prec = kAtom;
    return format_real(re);
  }
  if (re == 0.0 && !std::signbit(re)) {
    if (std::signbit(im)) {
      prec = kUnary;
      return "-" + format_real(-im) + "i";
    }
    prec = kAtom;
    return format_real(im) + "i";
  }
  prec = kSum;
  std::string s = std::signbit(re) ? "-" + format_real(-re) : format_real(re);
  s += std::signbit(im) ? "-" : "+";
  s += format_real(std::abs(im)) + "i";
  return s;
}

std::string print(const Expr& e, int& prec);

std::string wrap(const Expr& e, int min_prec) {
  int p = 0;
  std::string s = print(e, p);
  return p < min_prec ? "(" + s + ")" : s;
}

std::string print(const Expr& e, int& prec) {
  switch (e.op()) {
    case Op::Literal:
      return format_literal(e.value(), prec);
    case Op::Var:
      prec = kAtom;
      return e.symbol().name();
    case Op::Neg:
      prec = kUnary;
      return "-" + wrap(e.arg(), kUnary);
    case Op::Conj:
    case Op::Re:
    case Op::Im:
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
    case Op::Log: {
      int p = 0;
      std::string inner = print(e.arg(), p);
      prec = kAtom;
      return std::string(function_name(e.op())) + "(" + inner + ")";
    }
    case Op::Add:
      prec = kSum;
      return wrap(e.lhs(), kSum) + " + " + wrap(e.rhs(), kProduct);
    case Op::Sub:
      prec = kSum;
      return wrap(e.lhs(), kSum) + " - " + wrap(e.rhs(), kProduct);
    case Op::Mul:
      prec = kProduct;
      return wrap(e.lhs(), kProduct) + "*" + wrap(e.rhs(), kUnary);
    case Op::Div:
      prec = kProduct;
      return wrap(e.lhs(), kProduct) + "/" + wrap(e.rhs(), kUnary);
    case Op::Pow: {
      prec = kPower;
      std::string exp_text = e.exponent() < 0 ? "(-" + std::to_string(-static_cast<long>(e.exponent())) + ")"
                                              : std::to_string(e.exponent());
      return wrap(e.lhs(), kAtom) + "^" + exp_text;
    }
  }
  return "?";
}

}  // namespace

std::string to_string(const Expr& e) {
  int p = 0;
  return print(e, p);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  Parser(std::string_view text, int m) : text_(text), m_(m) {}

  Expr parse() {
    Expr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, ParseError::Kind kind = ParseError::Kind::Syntax) const {
    throw ParseError(kind, pos_, msg);
  }
  [[noreturn]] void fail_at(std::size_t at, const std::string& msg, ParseError::Kind kind) const {
    throw ParseError(kind, at, msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r' ||
                                   text_[pos_] == '\n'))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but reached end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(Op::Add, lhs, term());
      } else if (accept('-')) {
        lhs = Expr::binary(Op::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(Op::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = Expr::binary(Op::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return Expr::unary(Op::Neg, unary());
    if (accept('+')) return unary();
    return factor();
  }

  Expr factor() {
    Expr b = base();
    if (accept('^')) {
      skip_ws();
      bool paren = accept('(');
      bool negative = accept('-');
      if (!negative) accept('+');
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("exponent must be an integer");
      long value = 0;
      for (std::size_t k = start; k < pos_; ++k) {
        value = value * 10 + (text_[k] - '0');
        if (value > 1'000'000) fail_at(start, "exponent too large", ParseError::Kind::Syntax);
      }
      if (paren) expect(')');
      return Expr::pow(b, static_cast<int>(negative ? -value : value));
    }
    return b;
  }

  Expr base() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return word();
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t n = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) fail_at(start, "malformed number", ParseError::Kind::Syntax);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;  // not an exponent; leave 'e' for the caller
    }
    const std::string token(text_.substr(start, pos_ - start));
    const double x = std::strtod(token.c_str(), nullptr);
    // An 'i' directly after the digits makes an imaginary literal ("2.5i").
    if (pos_ < text_.size() && text_[pos_] == 'i' &&
        !(pos_ + 1 < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])))) {
      ++pos_;
      return Expr::literal(cplx{0.0, x});
    }
    return Expr::literal(cplx{x, 0.0});
  }

  Expr word() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    const std::size_t digit_start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const bool has_digits = pos_ > digit_start;

    if (!has_digits) {
      if (name == "i") return Expr::literal(cplx{0.0, 1.0});
      static constexpr std::pair<const char*, Op> kFunctions[] = {
          {"sin", Op::Sin}, {"cos", Op::Cos},   {"exp", Op::Exp}, {"log", Op::Log},
          {"conj", Op::Conj}, {"re", Op::Re}, {"im", Op::Im},
      };
      for (const auto& [fname, op] : kFunctions) {
        if (name == fname) {
          expect('(');
          Expr a = expr();
          expect(')');
          return Expr::unary(op, a);
        }
      }
      fail_at(start, "unknown symbol '" + name + "'", ParseError::Kind::UnknownSymbol);
    }
    const std::string full(text_.substr(start, pos_ - start));
    if (name != "z" && name != "w")
      fail_at(start, "unknown symbol '" + full + "'", ParseError::Kind::UnknownSymbol);
    long index = 0;
    for (std::size_t k = digit_start; k < pos_; ++k) {
      index = index * 10 + (text_[k] - '0');
      if (index > 1'000'000) break;
    }
    if (index < 1 || index > m_)
      fail_at(start, "symbol '" + full + "' out of range for dimension m=" + std::to_string(m_),
              ParseError::Kind::IndexOutOfRange);
    const int idx = static_cast<int>(index);
    return Expr::var(name == "z" ? Symbol::z(idx) : Symbol::w(idx));
  }

  std::string_view text_;
  int m_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expression(std::string_view text, int m) {
  if (m < 0) throw InvalidArgument("parse_expression: negative dimension");
  return Parser(text, m).parse();
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

cplx integer_power(cplx x, int n) {
  cplx result{1.0, 0.0};
  unsigned long k = static_cast<unsigned long>(n < 0 ? -static_cast<long>(n) : n);
  cplx b = x;
  while (k) {
    if (k & 1u) result *= b;
    b *= b;
    k >>= 1u;
  }
  return result;
}

}  // namespace

cplx evaluate(const Expr& e, const EvalPoint& p) {
  switch (e.op()) {
    case Op::Literal: return e.value();
    case Op::Var: return p[e.symbol()];
    case Op::Neg: return -evaluate(e.arg(), p);
    case Op::Conj: return std::conj(evaluate(e.arg(), p));
    case Op::Re: return std::real(evaluate(e.arg(), p));
    case Op::Im: return std::imag(evaluate(e.arg(), p));
    case Op::Sin: return std::sin(evaluate(e.arg(), p));
    case Op::Cos: return std::cos(evaluate(e.arg(), p));
    case Op::Exp: return std::exp(evaluate(e.arg(), p));
    case Op::Log: {
      const cplx a = evaluate(e.arg(), p);
      if (a == cplx{}) throw EvaluationDomainError("log of zero", to_string(e));
      return std::log(a);
    }
    case Op::Add: return evaluate(e.lhs(), p) + evaluate(e.rhs(), p);
    case Op::Sub: return evaluate(e.lhs(), p) - evaluate(e.rhs(), p);
    case Op::Mul: return evaluate(e.lhs(), p) * evaluate(e.rhs(), p);
    case Op::Div: {
      const cplx num = evaluate(e.lhs(), p);
      const cplx den = evaluate(e.rhs(), p);
      if (den == cplx{}) throw EvaluationDomainError("division by zero", to_string(e));
      return num / den;
    }
    case Op::Pow: {
      const cplx b = evaluate(e.lhs(), p);
      if (e.exponent() < 0) {
        if (b == cplx{}) throw EvaluationDomainError("division by zero", to_string(e));
        return cplx{1.0, 0.0} / integer_power(b, e.exponent());
      }
      return integer_power(b, e.exponent());
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Differentiation

Expr diff(const Expr& e, Symbol s) {
  switch (e.op()) {
    case Op::Literal: return Expr{};
    case Op::Var: return e.symbol() == s ? Expr(1.0) : Expr{};
    case Op::Neg: return -diff(e.arg(), s);
    case Op::Conj:
    case Op::Re:
    case Op::Im:
      return Expr{};
    case Op::Sin: return cos(e.arg()) * diff(e.arg(), s);
    case Op::Cos: return -(sin(e.arg()) * diff(e.arg(), s));
    case Op::Exp: return e * diff(e.arg(), s);
    case Op::Log: return diff(e.arg(), s) / e.arg();
    case Op::Add: return diff(e.lhs(), s) + diff(e.rhs(), s);
    case Op::Sub: return diff(e.lhs(), s) - diff(e.rhs(), s);
    case Op::Mul: return diff(e.lhs(), s) * e.rhs() + e.lhs() * diff(e.rhs(), s);
    case Op::Div: {
      const Expr dn = diff(e.lhs(), s);
      const Expr dd = diff(e.rhs(), s);
      if (dd.is_zero()) return dn / e.rhs();
      return (dn * e.rhs() - e.lhs() * dd) / pow(e.rhs(), 2);
    }
    case Op::Pow: {
      const int n = e.exponent();
      if (n == 0) return Expr{};
      return Expr(static_cast<double>(n)) * pow(e.lhs(), n - 1) * diff(e.lhs(), s);
    }
  }
  return Expr{};
}

// ---------------------------------------------------------------------------
// Simplification and inspection

Expr simplify(const Expr& e) {
  switch (e.op()) {
    case Op::Literal:
    case Op::Var:
      return e;
    case Op::Neg: return -simplify(e.arg());
    case Op::Conj: return conj(simplify(e.arg()));
    case Op::Re: return re(simplify(e.arg()));
    case Op::Im: return im(simplify(e.arg()));
    case Op::Sin: return sin(simplify(e.arg()));
    case Op::Cos: return cos(simplify(e.arg()));
    case Op::Exp: return exp(simplify(e.arg()));
    case Op::Log: return log(simplify(e.arg()));
    case Op::Add: return simplify(e.lhs()) + simplify(e.rhs());
    case Op::Sub: return simplify(e.lhs()) - simplify(e.rhs());
    case Op::Mul: return simplify(e.lhs()) * simplify(e.rhs());
    case Op::Div: return simplify(e.lhs()) / simplify(e.rhs());
    case Op::Pow: return pow(simplify(e.lhs()), e.exponent());
  }
  return e;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::Literal: return a.value() == b.value();
    case Op::Var: return a.symbol() == b.symbol();
    case Op::Pow: return a.exponent() == b.exponent() && structurally_equal(a.lhs(), b.lhs());
    default:
      if (is_unary(a.op())) return structurally_equal(a.arg(), b.arg());
      return structurally_equal(a.lhs(), b.lhs()) && structurally_equal(a.rhs(), b.rhs());
  }
}

namespace {

template <class F>
bool any_node(const Expr& e, F&& pred) {
  if (pred(e)) return true;
  switch (e.op()) {
    case Op::Literal:
    case Op::Var:
      return false;
    case Op::Pow:
      return any_node(e.lhs(), pred);
    default:
      if (is_unary(e.op())) return any_node(e.arg(), pred);
      return any_node(e.lhs(), pred) || any_node(e.rhs(), pred);
  }
}

}  // namespace

bool depends_on_symbols(const Expr& e) {
  return any_node(e, [](const Expr& n) { return n.op() == Op::Var; });
}

bool depends_on(const Expr& e, Symbol s) {
  return any_node(e, [&](const Expr& n) { return n.op() == Op::Var && n.symbol() == s; });
}

int max_symbol_index(const Expr& e) {
  int best = 0;
  any_node(e, [&](const Expr& n) {
    if (n.op() == Op::Var) best = std::max(best, n.symbol().index);
    return false;
  });
  return best;
}

bool is_holomorphic(const Expr& e) {
  return !any_node(e, [](const Expr& n) {
    return (n.op() == Op::Conj || n.op() == Op::Re || n.op() == Op::Im) && depends_on_symbols(n.arg());
  });
}

bool has_real_coefficients(const Expr& e) {
  return !any_node(e, [](const Expr& n) { return n.op() == Op::Literal && n.value().imag() != 0.0; });
}

}  // namespace kahler
