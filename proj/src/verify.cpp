#include "kahler/verify.hpp"

#include <algorithm>
#include <cmath>

namespace kahler {

namespace {

EvalPoint shifted(const EvalPoint& p, int slot, double h) {
  EvalPoint q = p;
  q[Symbol::from_slot(slot, p.dimension())] += h;
  return q;
}

double scale_of(const TwoForm& k) { return std::max(1.0, k.matrix().max_abs()); }

}  // namespace

double antisymmetry_defect(const TwoForm& phi) {
  const int n = 2 * phi.dimension();
  double d = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) d = std::max(d, std::abs(phi(p, q) + phi(q, p)));
  return d;
}

double kahler_fd_error(const LagrangianSystem& sys, const EvalPoint& p, double h) {
  const int m = sys.dimension();
  const int n = 2 * m;
  const SymbolicOneForm c = vertical_d(sys.lagrangian(), m);
  // dc(p, q) = d c_q / d u_p
  std::vector<std::vector<cplx>> dc(n, std::vector<cplx>(n));
  for (int a = 0; a < n; ++a) {
    const EvalPoint up = shifted(p, a, h);
    const EvalPoint dn = shifted(p, a, -h);
    for (int q = 0; q < n; ++q) dc[a][q] = (evaluate(c[q], up) - evaluate(c[q], dn)) / (2.0 * h);
  }
  const TwoForm k = sys.kahler_form().evaluate(p);
  double err = 0.0;
  for (int a = 0; a < n; ++a)
    for (int q = 0; q < n; ++q) {
      const cplx fd = a == q ? cplx{} : -(dc[a][q] - dc[q][a]);
      err = std::max(err, std::abs(k(a, q) - fd));
    }
  return err / scale_of(k);
}

double kahler_closedness_fd(const LagrangianSystem& sys, const EvalPoint& p, double h) {
  const int n = 2 * sys.dimension();
  std::vector<TwoForm> deriv;
  for (int a = 0; a < n; ++a) {
    const TwoForm up = sys.kahler_form().evaluate(shifted(p, a, h));
    const TwoForm dn = sys.kahler_form().evaluate(shifted(p, a, -h));
    TwoForm d(sys.dimension());
    for (int q = 0; q < n; ++q)
      for (int r = q + 1; r < n; ++r) d.set(q, r, (up(q, r) - dn(q, r)) / (2.0 * h));
    deriv.push_back(std::move(d));
  }
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int q = a + 1; q < n; ++q)
      for (int r = q + 1; r < n; ++r)
        worst = std::max(worst, std::abs(deriv[a](q, r) - deriv[q](a, r) + deriv[r](a, q)));
  return worst / scale_of(sys.kahler_form().evaluate(p));
}

double energy_differential_fd_error(const LagrangianSystem& sys, const PhaseState& s, const VectorField& xi,
                                    double h) {
  const OneForm de = energy_differential(sys, s, xi);
  const int n = 2 * sys.dimension();
  double err = 0.0;
  for (int a = 0; a < n; ++a) {
    const EvalPoint up = shifted(s.point(), a, h);
    const EvalPoint dn = shifted(s.point(), a, -h);
    const PhaseState su{s.t, up.z(), up.w()};
    const PhaseState sd{s.t, dn.z(), dn.w()};
    const cplx fd = (energy(sys, su, xi) - energy(sys, sd, xi)) / (2.0 * h);
    err = std::max(err, std::abs(de[a] - fd) / std::max(1.0, std::abs(de[a])));
  }
  return err;
}

}  // namespace kahler
