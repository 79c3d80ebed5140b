#include "kahler/real_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "kahler/errors.hpp"

namespace kahler {

RealMatrix realify(const ComplexMatrix& a) {
  const std::size_t n = a.rows();
  const std::size_t k = a.cols();
  RealMatrix r(2 * n, 2 * k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const cplx v = a(i, j);
      r(i, j) = v.real();
      r(i, k + j) = -v.imag();
      r(n + i, j) = v.imag();
      r(n + i, k + j) = v.real();
    }
  return r;
}

ComplexMatrix complexify(const RealMatrix& r) {
  if (r.rows % 2 != 0 || r.cols % 2 != 0) throw DimensionMismatch("complexify: odd real dimensions");
  const std::size_t n = r.rows / 2;
  const std::size_t k = r.cols / 2;
  ComplexMatrix a(n, k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) a(i, j) = {r(i, j), r(n + i, j)};
  return a;
}

std::vector<double> realify(std::span<const cplx> v) {
  std::vector<double> out(2 * v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = v[i].real();
    out[v.size() + i] = v[i].imag();
  }
  return out;
}

std::vector<cplx> complexify(std::span<const double> v) {
  if (v.size() % 2 != 0) throw DimensionMismatch("complexify: odd vector length");
  const std::size_t n = v.size() / 2;
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {v[i], v[n + i]};
  return out;
}

GaussJordanResult gauss_jordan_solve(RealMatrix m, std::vector<double> b, double relative_threshold) {
  const std::size_t n = m.rows;
  if (m.cols != n || b.size() != n) throw DimensionMismatch("gauss_jordan_solve: shape mismatch");
  GaussJordanResult res;
  double scale = 0.0;
  for (double v : m.data) scale = std::max(scale, std::fabs(v));
  const double threshold = relative_threshold * scale;

  std::vector<std::size_t> col_of(n);
  std::iota(col_of.begin(), col_of.end(), std::size_t{0});
  double max_pivot = 0.0;
  double min_pivot = std::numeric_limits<double>::infinity();

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pr = k, pc = k;
    double best = -1.0;
    for (std::size_t i = k; i < n; ++i)
      for (std::size_t j = k; j < n; ++j)
        if (std::fabs(m(i, j)) > best) {
          best = std::fabs(m(i, j));
          pr = i;
          pc = j;
        }
    if (!(best > threshold)) {
      res.singular = true;
      res.rank = k;
      res.condition_estimate = std::numeric_limits<double>::infinity();
      return res;
    }
    if (pr != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(pr, j));
      std::swap(b[k], b[pr]);
    }
    if (pc != k) {
      for (std::size_t i = 0; i < n; ++i) std::swap(m(i, k), m(i, pc));
      std::swap(col_of[k], col_of[pc]);
    }
    max_pivot = std::max(max_pivot, best);
    min_pivot = std::min(min_pivot, best);

    const double inv = 1.0 / m(k, k);
    for (std::size_t j = k; j < n; ++j) m(k, j) *= inv;
    b[k] *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const double f = m(i, k);
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
      b[i] -= f * b[k];
    }
  }
  res.rank = n;
  res.x.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) res.x[col_of[k]] = b[k];
  res.condition_estimate = n == 0 ? 1.0 : max_pivot / min_pivot;
  return res;
}

// ---------------------------------------------------------------------------

namespace {

struct Assembly {
  ComplexMatrix kahler;  // 2m x 2m, from the closed form 2i H(z, w)
  ComplexMatrix saddle;  // (2m + r) square
  std::vector<cplx> rhs;
  std::vector<cplx> grad;
  std::vector<std::vector<cplx>> omega;
};

Assembly assemble(const LagrangianSystem& sys, const PhaseState& s) {
  const int m = sys.dimension();
  const int n = 2 * m;
  const int r = sys.constraint_count();
  if (s.dimension() != m) throw DimensionMismatch("state dimension does not match the system");
  const EvalPoint pt = s.point();
  const cplx I{0.0, 1.0};

  ComplexMatrix h(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) h(p, q) = evaluate(sys.hessian(p, q), pt);

  Assembly as;
  as.kahler = ComplexMatrix(n, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      as.kahler(i, m + j) = 2.0 * I * h(i, m + j);
      as.kahler(m + j, i) = -2.0 * I * h(i, m + j);
    }

  as.grad.resize(n);
  for (int p = 0; p < n; ++p) as.grad[p] = evaluate(sys.gradient()[p], pt);
  for (const auto& c : sys.constraints()) {
    std::vector<cplx> row(n);
    for (int p = 0; p < n; ++p) row[p] = evaluate(c.form[p], pt);
    as.omega.push_back(std::move(row));
  }

  // z-rows: -i H xi, w-rows: +i H xi, from the Euler-Lagrange form of the
  // equations; the constraint block is appended.
  as.saddle = ComplexMatrix(n + r, n + r);
  for (int j = 0; j < n; ++j) {
    const cplx sign = j < m ? -I : I;
    for (int p = 0; p < n; ++p) as.saddle(j, p) = sign * h(j, p);
  }
  for (int a = 0; a < r; ++a)
    for (int p = 0; p < n; ++p) {
      as.saddle(p, n + a) = -as.omega[a][p];
      as.saddle(n + a, p) = as.omega[a][p];
    }
  as.rhs.assign(n + r, cplx{});
  for (int p = 0; p < n; ++p) as.rhs[p] = -as.grad[p];
  return as;
}

}  // namespace

RealSplitSystem build_real_split(const LagrangianSystem& sys, const PhaseState& s) {
  const Assembly as = assemble(sys, s);
  RealSplitSystem out;
  out.m = sys.dimension();
  out.r = sys.constraint_count();
  out.matrix = realify(as.saddle);
  out.rhs = realify(as.rhs);
  return out;
}

SemispraySolution realify_and_solve(const LagrangianSystem& sys, const PhaseState& s) {
  const Assembly as = assemble(sys, s);
  const int m = sys.dimension();
  const int n = 2 * m;
  const int r = sys.constraint_count();

  const GaussJordanResult k = gauss_jordan_solve(realify(as.kahler), std::vector<double>(2 * n, 0.0));
  if (k.singular) throw SingularKahlerMatrix("Kahler matrix is singular (real split)", k.condition_estimate);

  const GaussJordanResult g = gauss_jordan_solve(realify(as.saddle), realify(as.rhs));
  if (g.singular) {
    if (r == 0) throw SingularKahlerMatrix("symplectic system is singular (real split)", g.condition_estimate);
    throw InconsistentConstraints("constrained saddle system is rank-deficient (real split)", g.condition_estimate);
  }
  const std::vector<cplx> x = complexify(g.x);

  SemispraySolution sol;
  sol.xi = VectorField::from_packed(std::span<const cplx>(x).first(n));
  sol.lambdas.assign(x.begin() + n, x.end());
  sol.condition_estimate = g.condition_estimate;
  for (int j = 0; j < n; ++j) {
    cplx v = -as.rhs[j];
    for (int p = 0; p < n + r; ++p) v += as.saddle(j, p) * x[p];
    sol.residual_symplectic = std::max(sol.residual_symplectic, std::abs(v));
  }
  for (int a = 0; a < r; ++a) {
    cplx v{};
    for (int p = 0; p < n; ++p) v += as.omega[a][p] * x[p];
    sol.constraint_residuals.push_back(std::abs(v));
    sol.residual_constraints = std::max(sol.residual_constraints, std::abs(v));
  }
  for (int i = 0; i < m; ++i) sol.semispray_defect = std::max(sol.semispray_defect, std::abs(x[i] - s.w[i]));
  return sol;
}

// ---------------------------------------------------------------------------

bool real_expressible(const LagrangianSystem& sys) {
  if (!has_real_coefficients(sys.lagrangian())) return false;
  for (const auto& c : sys.constraints())
    for (int p = 0; p < 2 * sys.dimension(); ++p)
      if (!has_real_coefficients(c.form[p])) return false;
  return true;
}

ClassicalElReport classical_el_check(const LagrangianSystem& sys, const Trajectory& tr) {
  ClassicalElReport rep;
  rep.real_expressible = real_expressible(sys);
  const int m = sys.dimension();
  const int r = sys.constraint_count();
  const auto& smp = tr.samples;
  if (smp.size() < 3) return rep;

  auto momentum = [&](const PhaseState& st, int i) { return evaluate(sys.gradient()[m + i], st.point()); };
  double sum = 0.0;
  for (std::size_t k = 1; k + 1 < smp.size(); ++k) {
    const PhaseState& st = smp[k].state;
    const EvalPoint pt = st.point();
    const double span = smp[k + 1].state.t - smp[k - 1].state.t;
    double worst = 0.0;
    for (int i = 0; i < m; ++i) {
      const cplx rate = (momentum(smp[k + 1].state, i) - momentum(smp[k - 1].state, i)) / span;
      cplx v = evaluate(sys.gradient()[i], pt) - rate;
      for (int a = 0; a < r && a < static_cast<int>(smp[k].solution.lambdas.size()); ++a)
        v -= smp[k].solution.lambdas[a] * evaluate(sys.constraints()[a].form[i], pt);
      worst = std::max(worst, std::abs(v));
    }
    rep.per_sample.push_back(worst);
    rep.max_residual = std::max(rep.max_residual, worst);
    sum += worst;
    ++rep.samples_checked;
  }
  rep.mean_residual = sum / static_cast<double>(rep.samples_checked);
  return rep;
}

}  // namespace kahler
