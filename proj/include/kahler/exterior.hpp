#pragma once

// Exterior calculus on the flat chart with ordered cobasis
// (dz1..dzm, dw1..dwm). The complex structure acts as +i on the z-sector and
// -i on the w-sector.

#include <utility>
#include <vector>

#include "kahler/expr.hpp"
#include "kahler/linalg.hpp"

namespace kahler {

/// Tangent vector: hol[i] multiplies d/dz_i, fib[i] multiplies d/dw_i.
struct VectorField {
  std::vector<cplx> hol;
  std::vector<cplx> fib;

  VectorField() = default;
  explicit VectorField(int m) : hol(m), fib(m) {}
  VectorField(std::vector<cplx> h, std::vector<cplx> f);
  static VectorField from_packed(std::span<const cplx> u);
  /// Coordinate basis vector d/du_slot.
  static VectorField basis(int slot, int m);

  int dimension() const { return static_cast<int>(hol.size()); }
  std::vector<cplx> packed() const;

  friend bool operator==(const VectorField&, const VectorField&) = default;
};

/// A 1-form with coefficients `a` on dz_i and `b` on dw_i.
template <class Coeff>
struct BasicOneForm {
  std::vector<Coeff> a;
  std::vector<Coeff> b;

  BasicOneForm() = default;
  explicit BasicOneForm(int m) : a(m), b(m) {}
  BasicOneForm(std::vector<Coeff> a_, std::vector<Coeff> b_) : a(std::move(a_)), b(std::move(b_)) {}

  int dimension() const { return static_cast<int>(a.size()); }
  const Coeff& operator[](int slot) const { return slot < dimension() ? a[slot] : b[slot - dimension()]; }
  Coeff& operator[](int slot) { return slot < dimension() ? a[slot] : b[slot - dimension()]; }
};

using OneForm = BasicOneForm<cplx>;
using SymbolicOneForm = BasicOneForm<Expr>;

/// Numeric 2-form: K(p,q) over the ordered cobasis with
/// Phi = sum_{p<q} K(p,q) e^p ^ e^q. Always antisymmetric.
class TwoForm {
 public:
  TwoForm() = default;
  explicit TwoForm(int m) : m_(m), k_(2 * m, 2 * m) {}
  /// Takes the upper triangle of `k` and mirrors it with negation.
  static TwoForm from_upper(const ComplexMatrix& k);

  int dimension() const { return m_; }
  cplx operator()(int p, int q) const { return k_(p, q); }
  /// Sets K(p,q) and K(q,p) = -K(p,q). Requires p != q.
  void set(int p, int q, cplx v);
  const ComplexMatrix& matrix() const { return k_; }

 private:
  int m_ = 0;
  ComplexMatrix k_;
};

/// Symbolic 2-form; entries for p<q are stored, the lower triangle is their
/// negation and the diagonal is zero.
class SymbolicTwoForm {
 public:
  SymbolicTwoForm() = default;
  explicit SymbolicTwoForm(int m);

  int dimension() const { return m_; }
  Expr operator()(int p, int q) const;
  void set_upper(int p, int q, Expr e);
  TwoForm evaluate(const EvalPoint& p) const;
  SymbolicTwoForm scaled(const Expr& c) const;

 private:
  int m_ = 0;
  std::vector<Expr> upper_;  // row-major strict upper triangle
  std::size_t index(int p, int q) const;
};

// Complex structure ---------------------------------------------------------

VectorField apply_J_vector(const VectorField& v);
OneForm apply_J_covector(const OneForm& alpha);
SymbolicOneForm apply_J_covector(const SymbolicOneForm& alpha);

// Forms of functions --------------------------------------------------------

/// d_J f = i (df/dz_i) dz_i - i (df/dw_i) dw_i.
SymbolicOneForm vertical_d(const Expr& f, int m);
/// Plain exterior derivative df of a function.
SymbolicOneForm differential(const Expr& f, int m);
/// K(p,q) = d_p c_q - d_q c_p.
SymbolicTwoForm exterior_derivative(const SymbolicOneForm& alpha);

OneForm evaluate(const SymbolicOneForm& alpha, const EvalPoint& p);

// Pairings ------------------------------------------------------------------

/// alpha(v) = sum a_i hol_i + b_i fib_i.
cplx pair(const OneForm& alpha, const VectorField& v);
/// (i_v Phi)_q = sum_p v^p K(p,q).
OneForm contract(const TwoForm& phi, const VectorField& v);
/// Phi(X, Y) = X^p K(p,q) Y^q.
cplx evaluate_two_form(const TwoForm& phi, const VectorField& x, const VectorField& y);
cplx evaluate_two_form(const SymbolicTwoForm& phi, const VectorField& x, const VectorField& y,
                       const EvalPoint& p);

// Hermitian metrics ---------------------------------------------------------

struct HermitianCompatibilityReport {
  /// max |g(JX,JY) - g(X,Y)| over the samples.
  double max_deviation = 0.0;
  /// max |Phi(X,Y) + conj(Phi(Y,X))| for Phi(X,Y) = g(X,JY); zero when the
  /// metric is compatible.
  double max_kahler_form_skew = 0.0;
  std::size_t samples = 0;
};

/// g is a 2m x 2m Hermitian positive-definite matrix acting as
/// g(X,Y) = conj(X)^T g Y. Throws InvalidMetric otherwise.
HermitianCompatibilityReport check_hermitian_compatibility(
    const ComplexMatrix& g, const std::vector<std::pair<VectorField, VectorField>>& samples);

/// Phi(X,Y) = g(X, JY).
cplx metric_kahler_form(const ComplexMatrix& g, const VectorField& x, const VectorField& y);

}  // namespace kahler
