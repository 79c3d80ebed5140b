#include "kahler/constraints.hpp"

#include <algorithm>
#include <cmath>

#include "kahler/errors.hpp"
#include "kahler/kernels.hpp"

namespace kahler {

namespace {

constexpr double kRankTolerance = 1e-10;

double norm2(std::span<const cplx> v) { return std::sqrt(kernels::dotc(v, v).real()); }

// Removes the components of v along the orthonormal vectors in `basis`
// (classical Gram-Schmidt, applied twice).
void orthogonalize(std::vector<cplx>& v, const std::vector<std::vector<cplx>>& basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis) kernels::caxpy(v, -kernels::dotc(b, v), b);
}

void scale(std::vector<cplx>& v, double s) {
  for (auto& x : v) x *= s;
}

double max_coefficient(const ComplexMatrix& w, int row) { return kernels::max_abs(w.row(row)); }

SymbolicTwoForm exterior_of(const SymbolicOneForm& f) { return exterior_derivative(f); }

}  // namespace

ConstraintSet::ConstraintSet(int m, std::vector<SymbolicOneForm> forms, std::vector<std::string> names)
    : m_(m), forms_(std::move(forms)), names_(std::move(names)) {
  if (m < 1) throw InvalidArgument("dimension must be at least 1");
  const int r = size();
  if (r < 1 || r > 2 * m - 1)
    throw InvalidArgument("constraint count must lie in [1, " + std::to_string(2 * m - 1) + "], got " +
                          std::to_string(r));
  if (names_.empty())
    for (int a = 0; a < r; ++a) names_.push_back("omega" + std::to_string(a + 1));
  if (static_cast<int>(names_.size()) != r) throw DimensionMismatch("one name per constraint form required");
  for (int a = 0; a < r; ++a) {
    if (forms_[a].dimension() != m) throw DimensionMismatch("constraint '" + names_[a] + "' has wrong dimension");
    for (int p = 0; p < 2 * m; ++p) {
      if (!is_holomorphic(forms_[a][p]))
        throw NonHolomorphicInput("constraint '" + names_[a] + "': conj/re/im applied to a coordinate");
      if (max_symbol_index(forms_[a][p]) > m)
        throw InvalidArgument("constraint '" + names_[a] + "': symbol index exceeds dimension");
    }
  }
}

ConstraintSet ConstraintSet::from_system(const LagrangianSystem& sys) {
  std::vector<SymbolicOneForm> forms;
  std::vector<std::string> names;
  for (const auto& c : sys.constraints()) {
    forms.push_back(c.form);
    names.push_back(c.name);
  }
  return ConstraintSet(sys.dimension(), std::move(forms), std::move(names));
}

ComplexMatrix ConstraintSet::coefficients(const EvalPoint& p) const {
  if (p.dimension() != m_) throw DimensionMismatch("ConstraintSet: point dimension mismatch");
  ComplexMatrix w(size(), 2 * m_);
  for (int a = 0; a < size(); ++a)
    for (int q = 0; q < 2 * m_; ++q) w(a, q) = evaluate(forms_[a][q], p);
  return w;
}

// ---------------------------------------------------------------------------

double BoxSampler::uniform() {
  // top 53 bits -> [0, 1) -> [-1, 1)
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

cplx BoxSampler::complex() {
  const double re = uniform();
  const double im = uniform();
  return {re, im};
}

EvalPoint BoxSampler::point(int m) {
  std::vector<cplx> z(m);
  std::vector<cplx> w(m);
  for (auto& v : z) v = complex();
  for (auto& v : w) v = complex();
  return {std::move(z), std::move(w)};
}

// ---------------------------------------------------------------------------

std::vector<VectorField> annihilator_basis(const ConstraintSet& cs, const PhaseState& s) {
  return annihilator_basis(cs, s.point());
}

std::vector<VectorField> annihilator_basis(const ConstraintSet& cs, const EvalPoint& p) {
  const ComplexMatrix w = cs.coefficients(p);
  const int n = 2 * cs.dimension();
  const int r = cs.size();

  // omega_a(v) = <conj(row_a), v>, so D is the orthogonal complement of the
  // conjugated rows.
  double largest = 0.0;
  for (int a = 0; a < r; ++a) largest = std::max(largest, norm2(w.row(a)));
  if (!(largest > 0.0)) throw RankDeficientConstraints("all constraint covectors vanish at the point");

  std::vector<std::vector<cplx>> ortho;
  for (int a = 0; a < r; ++a) {
    std::vector<cplx> v(n);
    for (int q = 0; q < n; ++q) v[q] = std::conj(w(a, q));
    orthogonalize(v, ortho);
    const double len = norm2(v);
    if (!(len > kRankTolerance * largest))
      throw RankDeficientConstraints("constraint covectors are linearly dependent at the point (form '" +
                                     cs.names()[a] + "')");
    scale(v, 1.0 / len);
    ortho.push_back(std::move(v));
  }

  std::vector<VectorField> out;
  for (int k = 0; k < n && static_cast<int>(ortho.size()) < n; ++k) {
    std::vector<cplx> v(n);
    v[k] = 1.0;
    orthogonalize(v, ortho);
    const double len = norm2(v);
    if (len < 1e-6) continue;
    scale(v, 1.0 / len);
    ortho.push_back(v);
    out.push_back(VectorField::from_packed(v));
  }
  if (static_cast<int>(out.size()) != n - r)
    throw RankDeficientConstraints("could not complete the annihilator basis");
  return out;
}

// ---------------------------------------------------------------------------

ClosednessReport closedness_test(const ConstraintSet& cs, int samples, std::uint64_t seed, double tol) {
  if (samples < 1) throw InvalidArgument("samples must be at least 1");
  const int r = cs.size();
  const int n = 2 * cs.dimension();
  std::vector<SymbolicTwoForm> d;
  for (const auto& f : cs.forms()) d.push_back(exterior_of(f));

  ClosednessReport rep;
  rep.measure.assign(r, 0.0);
  BoxSampler sampler(seed);
  for (int k = 0; k < samples; ++k) {
    const EvalPoint p = sampler.point(cs.dimension());
    try {
      const ComplexMatrix w = cs.coefficients(p);
      std::vector<double> local(r);
      for (int a = 0; a < r; ++a) {
        const TwoForm dw = d[a].evaluate(p);
        double top = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j) top = std::max(top, std::abs(dw(i, j)));
        const double c = max_coefficient(w, a);
        local[a] = top / (c > 0.0 ? c : 1.0);
      }
      for (int a = 0; a < r; ++a) rep.measure[a] = std::max(rep.measure[a], local[a]);
      ++rep.valid_samples;
    } catch (const EvaluationDomainError& e) {
      ++rep.skipped_samples;
      rep.warnings.push_back("sample " + std::to_string(k) + " skipped: " + e.what());
    }
  }
  if (rep.valid_samples == 0)
    throw EvaluationDomainError("closedness_test: no sample could be evaluated", "constraint set");
  rep.closed.resize(r);
  for (int a = 0; a < r; ++a) rep.closed[a] = rep.measure[a] <= tol;
  return rep;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Closed: return "Closed";
    case Verdict::LocallyHolonomic: return "LocallyHolonomic";
    case Verdict::Anholonomic: return "Anholonomic";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

Classification frobenius_test(const ConstraintSet& cs, int samples, std::uint64_t seed, double tol) {
  Classification out;
  if (samples < 1) throw InvalidArgument("samples must be at least 1");
  const int r = cs.size();
  std::vector<SymbolicTwoForm> d;
  for (const auto& f : cs.forms()) d.push_back(exterior_of(f));

  bool closedness_ok = false;
  try {
    out.closedness = closedness_test(cs, samples, seed, tol);
    closedness_ok = true;
  } catch (const EvaluationDomainError&) {
  }

  BoxSampler sampler(seed);
  std::size_t valid = 0;
  for (int k = 0; k < samples; ++k) {
    SampleEvidence ev;
    ev.point = sampler.point(cs.dimension());
    try {
      const std::vector<VectorField> basis = annihilator_basis(cs, ev.point);
      const ComplexMatrix w = cs.coefficients(ev.point);
      WitnessPair best;
      best.measure = -1.0;
      for (int a = 0; a < r; ++a) {
        const TwoForm dw = d[a].evaluate(ev.point);
        const double c = max_coefficient(w, a);
        const double norm = c > 0.0 ? c : 1.0;
        for (std::size_t i = 0; i < basis.size(); ++i)
          for (std::size_t j = i + 1; j < basis.size(); ++j) {
            const cplx v = evaluate_two_form(dw, basis[i], basis[j]);
            const double mval = std::abs(v) / norm;
            if (mval > best.measure) best = {a, ev.point, basis[i], basis[j], v, mval};
          }
      }
      ev.max_bracket = std::max(0.0, best.measure);
      out.max_bracket = std::max(out.max_bracket, ev.max_bracket);
      if (best.measure > tol) out.witnesses.push_back(std::move(best));
      ++valid;
    } catch (const RankDeficientConstraints&) {
      ev.rank_deficient = true;
      ++out.rank_deficient_samples;
    } catch (const EvaluationDomainError&) {
      ev.evaluation_failed = true;
    }
    out.evidence.push_back(std::move(ev));
  }
  std::stable_sort(out.witnesses.begin(), out.witnesses.end(),
                   [](const WitnessPair& a, const WitnessPair& b) { return a.measure > b.measure; });

  if (valid == 0)
    out.verdict = Verdict::Indeterminate;
  else if (closedness_ok && std::all_of(out.closedness.closed.begin(), out.closedness.closed.end(),
                                        [](bool b) { return b; }))
    out.verdict = Verdict::Closed;
  else if (out.witnesses.empty())
    out.verdict = Verdict::LocallyHolonomic;
  else
    out.verdict = Verdict::Anholonomic;
  return out;
}

bool is_basic(const SymbolicOneForm& form) {
  const int m = form.dimension();
  for (int i = 0; i < m; ++i)
    if (!simplify(form.b[i]).is_zero()) return false;
  for (int i = 0; i < m; ++i)
    for (int j = 1; j <= std::max(m, max_symbol_index(form.a[i])); ++j)
      if (depends_on(form.a[i], Symbol::w(j))) return false;
  return true;
}

}  // namespace kahler
