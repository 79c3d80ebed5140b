#include "kahler/exterior.hpp"

#include <cmath>

#include "kahler/errors.hpp"
#include "kahler/kernels.hpp"

namespace kahler {

namespace {

// Exact multiplication by +i and -i (component swap, no rounding).
inline cplx times_i(cplx v) { return {-v.imag(), v.real()}; }
inline cplx times_minus_i(cplx v) { return {v.imag(), -v.real()}; }

void require_same(int m1, int m2, const char* what) {
  if (m1 != m2) throw DimensionMismatch(std::string(what) + ": dimension mismatch");
}

}  // namespace

VectorField::VectorField(std::vector<cplx> h, std::vector<cplx> f) : hol(std::move(h)), fib(std::move(f)) {
  if (hol.size() != fib.size()) throw DimensionMismatch("VectorField: hol and fib lengths differ");
}

VectorField VectorField::from_packed(std::span<const cplx> u) {
  if (u.size() % 2 != 0) throw DimensionMismatch("VectorField: packed vector has odd length");
  const auto m = u.size() / 2;
  return {std::vector<cplx>(u.begin(), u.begin() + m), std::vector<cplx>(u.begin() + m, u.end())};
}

VectorField VectorField::basis(int slot, int m) {
  VectorField v(m);
  if (slot < m)
    v.hol[slot] = 1.0;
  else
    v.fib[slot - m] = 1.0;
  return v;
}

std::vector<cplx> VectorField::packed() const {
  std::vector<cplx> u(hol);
  u.insert(u.end(), fib.begin(), fib.end());
  return u;
}

// ---------------------------------------------------------------------------

TwoForm TwoForm::from_upper(const ComplexMatrix& k) {
  if (k.rows() != k.cols() || k.rows() % 2 != 0) throw DimensionMismatch("TwoForm: matrix must be 2m x 2m");
  TwoForm phi(static_cast<int>(k.rows() / 2));
  const int n = static_cast<int>(k.rows());
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) phi.set(p, q, k(p, q));
  return phi;
}

void TwoForm::set(int p, int q, cplx v) {
  if (p == q) throw InvalidArgument("TwoForm::set: diagonal entries are zero");
  k_(p, q) = v;
  k_(q, p) = -v;
}

SymbolicTwoForm::SymbolicTwoForm(int m) : m_(m), upper_(static_cast<std::size_t>(m) * (2 * m - 1)) {}

std::size_t SymbolicTwoForm::index(int p, int q) const {
  const int n = 2 * m_;
  // offset of row p in the strict upper triangle
  return static_cast<std::size_t>(p) * (2 * n - p - 1) / 2 + (q - p - 1);
}

Expr SymbolicTwoForm::operator()(int p, int q) const {
  if (p == q) return Expr{};
  if (p < q) return upper_[index(p, q)];
  return -upper_[index(q, p)];
}

void SymbolicTwoForm::set_upper(int p, int q, Expr e) {
  if (!(p < q)) throw InvalidArgument("SymbolicTwoForm::set_upper: requires p < q");
  upper_[index(p, q)] = std::move(e);
}

TwoForm SymbolicTwoForm::evaluate(const EvalPoint& pt) const {
  require_same(m_, pt.dimension(), "SymbolicTwoForm::evaluate");
  TwoForm phi(m_);
  const int n = 2 * m_;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      const Expr& e = upper_[index(p, q)];
      if (!e.is_zero()) phi.set(p, q, kahler::evaluate(e, pt));
    }
  return phi;
}

SymbolicTwoForm SymbolicTwoForm::scaled(const Expr& c) const {
  SymbolicTwoForm out(m_);
  for (std::size_t k = 0; k < upper_.size(); ++k) out.upper_[k] = simplify(c * upper_[k]);
  return out;
}

// ---------------------------------------------------------------------------

VectorField apply_J_vector(const VectorField& v) {
  VectorField out(v.dimension());
  for (int i = 0; i < v.dimension(); ++i) {
    out.hol[i] = times_i(v.hol[i]);
    out.fib[i] = times_minus_i(v.fib[i]);
  }
  return out;
}

OneForm apply_J_covector(const OneForm& alpha) {
  OneForm out(alpha.dimension());
  for (int i = 0; i < alpha.dimension(); ++i) {
    out.a[i] = times_i(alpha.a[i]);
    out.b[i] = times_minus_i(alpha.b[i]);
  }
  return out;
}

SymbolicOneForm apply_J_covector(const SymbolicOneForm& alpha) {
  SymbolicOneForm out(alpha.dimension());
  const Expr plus_i(cplx{0.0, 1.0});
  const Expr minus_i(cplx{0.0, -1.0});
  for (int i = 0; i < alpha.dimension(); ++i) {
    out.a[i] = plus_i * alpha.a[i];
    out.b[i] = minus_i * alpha.b[i];
  }
  return out;
}

SymbolicOneForm vertical_d(const Expr& f, int m) {
  SymbolicOneForm out(m);
  const Expr plus_i(cplx{0.0, 1.0});
  const Expr minus_i(cplx{0.0, -1.0});
  for (int i = 0; i < m; ++i) {
    out.a[i] = simplify(plus_i * diff(f, Symbol::z(i + 1)));
    out.b[i] = simplify(minus_i * diff(f, Symbol::w(i + 1)));
  }
  return out;
}

SymbolicOneForm differential(const Expr& f, int m) {
  SymbolicOneForm out(m);
  for (int i = 0; i < m; ++i) {
    out.a[i] = simplify(diff(f, Symbol::z(i + 1)));
    out.b[i] = simplify(diff(f, Symbol::w(i + 1)));
  }
  return out;
}

SymbolicTwoForm exterior_derivative(const SymbolicOneForm& alpha) {
  const int m = alpha.dimension();
  const int n = 2 * m;
  SymbolicTwoForm out(m);
  for (int p = 0; p < n; ++p) {
    const Symbol sp = Symbol::from_slot(p, m);
    for (int q = p + 1; q < n; ++q) {
      const Symbol sq = Symbol::from_slot(q, m);
      out.set_upper(p, q, simplify(diff(alpha[q], sp) - diff(alpha[p], sq)));
    }
  }
  return out;
}

OneForm evaluate(const SymbolicOneForm& alpha, const EvalPoint& p) {
  require_same(alpha.dimension(), p.dimension(), "evaluate(OneForm)");
  OneForm out(alpha.dimension());
  for (int i = 0; i < alpha.dimension(); ++i) {
    out.a[i] = kahler::evaluate(alpha.a[i], p);
    out.b[i] = kahler::evaluate(alpha.b[i], p);
  }
  return out;
}

// ---------------------------------------------------------------------------

cplx pair(const OneForm& alpha, const VectorField& v) {
  require_same(alpha.dimension(), v.dimension(), "pair");
  return kernels::dotu(alpha.a, v.hol) + kernels::dotu(alpha.b, v.fib);
}

OneForm contract(const TwoForm& phi, const VectorField& v) {
  require_same(phi.dimension(), v.dimension(), "contract");
  const int m = phi.dimension();
  const std::vector<cplx> u = v.packed();
  // (i_v Phi)_q = sum_p v^p K(p,q) = (K^T v)_q
  const ComplexMatrix kt = phi.matrix().transpose();
  const std::vector<cplx> c = kt.multiply(u);
  return OneForm(std::vector<cplx>(c.begin(), c.begin() + m), std::vector<cplx>(c.begin() + m, c.end()));
}

cplx evaluate_two_form(const TwoForm& phi, const VectorField& x, const VectorField& y) {
  require_same(phi.dimension(), x.dimension(), "evaluate_two_form");
  require_same(phi.dimension(), y.dimension(), "evaluate_two_form");
  const std::vector<cplx> xu = x.packed();
  const std::vector<cplx> yu = y.packed();
  // Sum over p<q of K(p,q)(x^p y^q - x^q y^p) is antisymmetric term by term.
  cplx s{};
  const int n = 2 * phi.dimension();
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      const cplx k = phi(p, q);
      if (k != cplx{}) s += k * (xu[p] * yu[q] - xu[q] * yu[p]);
    }
  return s;
}

cplx evaluate_two_form(const SymbolicTwoForm& phi, const VectorField& x, const VectorField& y,
                       const EvalPoint& p) {
  return evaluate_two_form(phi.evaluate(p), x, y);
}

// ---------------------------------------------------------------------------

namespace {

cplx metric_apply(const ComplexMatrix& g, const std::vector<cplx>& x, const std::vector<cplx>& y) {
  return kernels::dotc(x, g.multiply(y));
}

void validate_metric(const ComplexMatrix& g) {
  const std::size_t n = g.rows();
  if (g.cols() != n || n % 2 != 0) throw InvalidMetric("metric must be a 2m x 2m matrix");
  const double scale = g.max_abs();
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p; q < n; ++q)
      if (std::abs(g(p, q) - std::conj(g(q, p))) > 1e-12 * scale)
        throw InvalidMetric("metric is not Hermitian at (" + std::to_string(p) + "," + std::to_string(q) + ")");
  // Cholesky: positive definiteness
  ComplexMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = g(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > 1e-14 * scale)) throw InvalidMetric("metric is not positive definite");
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      cplx s = g(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / l(j, j).real();
    }
  }
}

}  // namespace

cplx metric_kahler_form(const ComplexMatrix& g, const VectorField& x, const VectorField& y) {
  return metric_apply(g, x.packed(), apply_J_vector(y).packed());
}

HermitianCompatibilityReport check_hermitian_compatibility(
    const ComplexMatrix& g, const std::vector<std::pair<VectorField, VectorField>>& samples) {
  validate_metric(g);
  HermitianCompatibilityReport report;
  const int m = static_cast<int>(g.rows() / 2);
  for (const auto& [x, y] : samples) {
    require_same(m, x.dimension(), "check_hermitian_compatibility");
    require_same(m, y.dimension(), "check_hermitian_compatibility");
    const cplx plain = metric_apply(g, x.packed(), y.packed());
    const cplx rotated = metric_apply(g, apply_J_vector(x).packed(), apply_J_vector(y).packed());
    report.max_deviation = std::max(report.max_deviation, std::abs(rotated - plain));
    const cplx fxy = metric_kahler_form(g, x, y);
    const cplx fyx = metric_kahler_form(g, y, x);
    report.max_kahler_form_skew = std::max(report.max_kahler_form_skew, std::abs(fxy + std::conj(fyx)));
    ++report.samples;
  }
  return report;
}

}  // namespace kahler
