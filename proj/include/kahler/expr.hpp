#pragma once

// Symbolic scalar fields over the phase-space coordinates z1..zm (positions)
// and w1..wm (velocities). Trees are immutable and shared; every operation
// returns a new tree.

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kahler {

using cplx = std::complex<double>;

enum class SymbolKind : std::uint8_t { Position, Velocity };

/// A coordinate symbol: z<index> for positions, w<index> for velocities.
/// Indices are 1-based.
struct Symbol {
  SymbolKind kind = SymbolKind::Position;
  int index = 1;

  static Symbol z(int i) { return {SymbolKind::Position, i}; }
  static Symbol w(int i) { return {SymbolKind::Velocity, i}; }

  /// Position in the ordered cobasis (dz1..dzm, dw1..dwm).
  int slot(int m) const { return (kind == SymbolKind::Position ? 0 : m) + index - 1; }
  static Symbol from_slot(int slot, int m) {
    return slot < m ? z(slot + 1) : w(slot - m + 1);
  }

  std::string name() const;

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

enum class Op : std::uint8_t {
  Literal,
  Var,
  Neg,
  Conj,
  Re,
  Im,
  Sin,
  Cos,
  Exp,
  Log,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
};

struct Node;

class Expr {
 public:
  /// The literal zero.
  Expr();
  Expr(cplx value);  // NOLINT: literals convert implicitly
  Expr(double value);  // NOLINT
  Expr(Symbol s);  // NOLINT

  static Expr literal(cplx value);
  static Expr var(Symbol s);
  static Expr unary(Op op, Expr arg);
  static Expr binary(Op op, Expr lhs, Expr rhs);
  static Expr pow(Expr base, int exponent);

  Op op() const;
  /// Literal value; zero for non-literals.
  cplx value() const;
  Symbol symbol() const;
  int exponent() const;
  const Expr& arg() const;
  const Expr& lhs() const;
  const Expr& rhs() const;

  bool is_literal() const { return op() == Op::Literal; }
  bool is_zero() const { return is_literal() && value() == cplx{}; }
  bool is_one() const { return is_literal() && value() == cplx{1.0, 0.0}; }

  const Node* node() const { return node_.get(); }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Node {
  Op op = Op::Literal;
  cplx value{};
  Symbol symbol{};
  int exponent = 0;
  Expr lhs;  // also the argument of unary nodes and the base of Pow
  Expr rhs;
};

// Smart constructors fold literal operands and the identities x+0, x*1, x*0,
// 0/x. They never reorder operands.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, int exponent);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr conj(const Expr& a);
Expr re(const Expr& a);
Expr im(const Expr& a);

/// Values for every coordinate of an m-dimensional chart.
class EvalPoint {
 public:
  EvalPoint() = default;
  explicit EvalPoint(int m) : z_(m), w_(m) {}
  EvalPoint(std::vector<cplx> z, std::vector<cplx> w);
  /// Builds from a packed (z1..zm, w1..wm) coordinate vector.
  static EvalPoint from_packed(std::span<const cplx> u);

  int dimension() const { return static_cast<int>(z_.size()); }
  cplx operator[](Symbol s) const;
  cplx& operator[](Symbol s);
  const std::vector<cplx>& z() const { return z_; }
  const std::vector<cplx>& w() const { return w_; }
  std::vector<cplx> packed() const;

 private:
  std::vector<cplx> z_;
  std::vector<cplx> w_;
};

/// Parses `text` under the expression grammar with symbols z1..zm, w1..wm.
/// Throws ParseError.
Expr parse_expression(std::string_view text, int m);

/// Prints an expression that parses back to an evaluation-equal tree.
std::string to_string(const Expr& e);

/// Double-precision evaluation. Throws EvaluationDomainError on division by
/// zero or log of zero.
cplx evaluate(const Expr& e, const EvalPoint& p);

/// Formal partial derivative; conj/re/im subtrees differentiate to zero.
Expr diff(const Expr& e, Symbol s);

/// Bottom-up constant folding and algebraic identities.
Expr simplify(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

/// True if some Symbol appears in the tree.
bool depends_on_symbols(const Expr& e);
bool depends_on(const Expr& e, Symbol s);
/// Largest symbol index used with each kind (0 if none).
int max_symbol_index(const Expr& e);

/// True unless conj/re/im is applied to a subtree containing a coordinate.
bool is_holomorphic(const Expr& e);

/// True if every literal in the tree has zero imaginary part.
bool has_real_coefficients(const Expr& e);

}  // namespace kahler
