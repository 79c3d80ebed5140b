#include "kahler/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "kahler/errors.hpp"
#include "kahler/kernels.hpp"

namespace kahler {

struct LagrangianSystem::Data {
  int m = 0;
  Expr lagrangian;
  std::vector<NamedForm> constraints;
  std::vector<std::string> labels;
  std::vector<Expr> gradient;
  std::vector<Expr> hessian;  // full 2m x 2m, symmetric by construction
  SymbolicTwoForm kahler;
};

namespace {

void check_expr(const Expr& e, int m, const std::string& where) {
  if (!is_holomorphic(e))
    throw NonHolomorphicInput(where + ": conj/re/im applied to a coordinate");
  if (max_symbol_index(e) > m)
    throw InvalidArgument(where + ": symbol index exceeds dimension " + std::to_string(m));
}

inline cplx times_i(cplx v) { return {-v.imag(), v.real()}; }

std::string fmt_time(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", t);
  return buf;
}

double max_norm(std::span<const cplx> v) { return v.empty() ? 0.0 : kernels::max_abs(v); }

struct Evaluated {
  std::vector<cplx> grad;  // 2m
  ComplexMatrix hess;      // 2m x 2m
};

Evaluated evaluate_derivatives(const LagrangianSystem& sys, const EvalPoint& pt) {
  const int n = 2 * sys.dimension();
  Evaluated ev{std::vector<cplx>(n), ComplexMatrix(n, n)};
  for (int p = 0; p < n; ++p) ev.grad[p] = evaluate(sys.gradient()[p], pt);
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q) {
      const cplx h = evaluate(sys.hessian(p, q), pt);
      ev.hess(p, q) = h;
      ev.hess(q, p) = h;
    }
  return ev;
}

// dE_L coefficients with xi frozen:
//   dE_j = i xi_hol^i H(z_i, j) - i xi_fib^i H(w_i, j) - L_j
std::vector<cplx> energy_differential_packed(const Evaluated& ev, const std::vector<cplx>& xi, int m) {
  const int n = 2 * m;
  std::vector<cplx> out(n);
  for (int j = 0; j < n; ++j) {
    cplx s{};
    for (int i = 0; i < m; ++i) s += xi[i] * ev.hess(i, j) - xi[m + i] * ev.hess(m + i, j);
    out[j] = times_i(s) - ev.grad[j];
  }
  return out;
}

void check_state(const LagrangianSystem& sys, const PhaseState& s) {
  if (s.dimension() != sys.dimension() || s.w.size() != s.z.size())
    throw DimensionMismatch("state dimension does not match the system");
}

}  // namespace

LagrangianSystem::LagrangianSystem(int m, Expr lagrangian, std::vector<NamedForm> constraints,
                                   std::vector<std::string> labels) {
  if (m < 1) throw InvalidArgument("dimension must be at least 1");
  const int r = static_cast<int>(constraints.size());
  if (r > 2 * m - 1)
    throw InvalidArgument("at most 2m - 1 = " + std::to_string(2 * m - 1) + " constraints allowed, got " +
                          std::to_string(r));
  check_expr(lagrangian, m, "Lagrangian");
  for (const auto& c : constraints) {
    if (c.form.dimension() != m) throw DimensionMismatch("constraint '" + c.name + "' has wrong dimension");
    for (int p = 0; p < 2 * m; ++p) check_expr(c.form[p], m, "constraint '" + c.name + "'");
  }
  if (labels.empty())
    for (int p = 0; p < 2 * m; ++p) labels.push_back(Symbol::from_slot(p, m).name());
  if (static_cast<int>(labels.size()) != 2 * m) throw DimensionMismatch("need one label per coordinate");

  auto d = std::make_shared<Data>();
  d->m = m;
  d->lagrangian = std::move(lagrangian);
  d->constraints = std::move(constraints);
  d->labels = std::move(labels);
  const int n = 2 * m;
  d->gradient.resize(n);
  for (int p = 0; p < n; ++p) d->gradient[p] = simplify(diff(d->lagrangian, Symbol::from_slot(p, m)));
  d->hessian.resize(static_cast<std::size_t>(n) * n);
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q) {
      Expr h = simplify(diff(d->gradient[p], Symbol::from_slot(q, m)));
      d->hessian[p * n + q] = h;
      d->hessian[q * n + p] = h;
    }
  d->kahler = exterior_derivative(vertical_d(d->lagrangian, m)).scaled(Expr(-1.0));
  data_ = std::move(d);
}

int LagrangianSystem::dimension() const { return data_->m; }
int LagrangianSystem::constraint_count() const { return static_cast<int>(data_->constraints.size()); }
const Expr& LagrangianSystem::lagrangian() const { return data_->lagrangian; }
const std::vector<NamedForm>& LagrangianSystem::constraints() const { return data_->constraints; }
const std::vector<std::string>& LagrangianSystem::labels() const { return data_->labels; }
const std::vector<Expr>& LagrangianSystem::gradient() const { return data_->gradient; }
const Expr& LagrangianSystem::hessian(int p, int q) const { return data_->hessian[p * 2 * data_->m + q]; }
const SymbolicTwoForm& LagrangianSystem::kahler_form() const { return data_->kahler; }

// ---------------------------------------------------------------------------

PhaseState PhaseState::from_packed(double t, std::span<const cplx> u) {
  if (u.size() % 2 != 0) throw DimensionMismatch("PhaseState: packed vector has odd length");
  const auto m = u.size() / 2;
  return {t, std::vector<cplx>(u.begin(), u.begin() + m), std::vector<cplx>(u.begin() + m, u.end())};
}

std::vector<cplx> PhaseState::packed() const {
  std::vector<cplx> u(z);
  u.insert(u.end(), w.begin(), w.end());
  return u;
}

bool PhaseState::finite() const {
  auto ok = [](cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); };
  return std::isfinite(t) && std::all_of(z.begin(), z.end(), ok) && std::all_of(w.begin(), w.end(), ok);
}

// ---------------------------------------------------------------------------

Expr build_standard_lagrangian(std::span<const double> masses, const Expr& potential) {
  if (masses.empty()) throw InvalidArgument("at least one mass required");
  const int m = static_cast<int>(masses.size());
  for (int i = 0; i < m; ++i)
    if (!(masses[i] > 0.0)) throw InvalidArgument("mass " + std::to_string(i + 1) + " must be positive");
  for (int i = 1; i <= std::max(m, max_symbol_index(potential)); ++i)
    if (depends_on(potential, Symbol::w(i))) throw InvalidArgument("potential must not depend on velocities");
  if (max_symbol_index(potential) > m) throw InvalidArgument("potential uses a coordinate beyond the dimension");
  Expr t;
  for (int i = 0; i < m; ++i) t = t + Expr(0.5 * masses[i]) * pow(Expr(Symbol::w(i + 1)), 2);
  return potential.is_zero() ? t : t - potential;
}

TwoForm assemble_kahler_matrix(const LagrangianSystem& sys, const PhaseState& s) {
  check_state(sys, s);
  return sys.kahler_form().evaluate(s.point());
}

cplx energy(const LagrangianSystem& sys, const PhaseState& s, const VectorField& xi) {
  check_state(sys, s);
  if (xi.dimension() != sys.dimension()) throw DimensionMismatch("energy: vector dimension mismatch");
  const EvalPoint pt = s.point();
  const int m = sys.dimension();
  cplx d{};
  for (int i = 0; i < m; ++i) {
    if (xi.hol[i] != cplx{}) d += xi.hol[i] * evaluate(sys.gradient()[i], pt);
    if (xi.fib[i] != cplx{}) d -= xi.fib[i] * evaluate(sys.gradient()[m + i], pt);
  }
  return times_i(d) - evaluate(sys.lagrangian(), pt);
}

OneForm energy_differential(const LagrangianSystem& sys, const PhaseState& s, const VectorField& xi) {
  check_state(sys, s);
  if (xi.dimension() != sys.dimension()) throw DimensionMismatch("energy_differential: vector dimension mismatch");
  const Evaluated ev = evaluate_derivatives(sys, s.point());
  const std::vector<cplx> c = energy_differential_packed(ev, xi.packed(), sys.dimension());
  const auto m = static_cast<std::size_t>(sys.dimension());
  return OneForm(std::vector<cplx>(c.begin(), c.begin() + m), std::vector<cplx>(c.begin() + m, c.end()));
}

SemispraySolution solve_semispray(const LagrangianSystem& sys, const PhaseState& s) {
  check_state(sys, s);
  const int m = sys.dimension();
  const int n = 2 * m;
  const int r = sys.constraint_count();
  const EvalPoint pt = s.point();

  const TwoForm phi = sys.kahler_form().evaluate(pt);
  {
    const LuFactorization lu(phi.matrix());
    if (lu.singular())
      throw SingularKahlerMatrix("Kahler matrix is singular at t = " + fmt_time(s.t), lu.condition_estimate());
  }

  const Evaluated ev = evaluate_derivatives(sys, pt);
  std::vector<OneForm> omega;
  omega.reserve(r);
  for (const auto& c : sys.constraints()) omega.push_back(evaluate(c.form, pt));

  // [ K^T - G   -W ] [xi    ]   [ -dL ]
  // [ W^T        0 ] [Lambda] = [  0  ]
  // with dE_L(xi) = G xi - dL, G(j,p) = +-i H(j,p) (sign + for z-columns).
  const int size = n + r;
  ComplexMatrix a(size, size);
  for (int j = 0; j < n; ++j)
    for (int p = 0; p < n; ++p) {
      const cplx g = p < m ? times_i(ev.hess(j, p)) : -times_i(ev.hess(j, p));
      a(j, p) = phi(p, j) - g;
    }
  for (int k = 0; k < r; ++k)
    for (int j = 0; j < n; ++j) {
      a(j, n + k) = -omega[k][j];
      a(n + k, j) = omega[k][j];
    }
  std::vector<cplx> rhs(size);
  for (int j = 0; j < n; ++j) rhs[j] = -ev.grad[j];

  const LuFactorization lu(a);
  if (lu.singular()) {
    if (r == 0)
      throw SingularKahlerMatrix("symplectic system is singular at t = " + fmt_time(s.t),
                                 lu.condition_estimate());
    throw InconsistentConstraints("constrained saddle system is rank-deficient at t = " + fmt_time(s.t),
                                  lu.condition_estimate());
  }
  const std::vector<cplx> x = lu.solve(rhs);

  SemispraySolution sol;
  sol.xi = VectorField::from_packed(std::span<const cplx>(x).first(n));
  sol.lambdas.assign(x.begin() + n, x.end());
  sol.condition_estimate = lu.condition_estimate();

  const std::vector<cplx> xi = sol.xi.packed();
  const OneForm ixi = contract(phi, sol.xi);
  const std::vector<cplx> de = energy_differential_packed(ev, xi, m);
  std::vector<cplx> res(n);
  for (int j = 0; j < n; ++j) {
    cplx v = ixi[j] - de[j];
    for (int k = 0; k < r; ++k) v -= sol.lambdas[k] * omega[k][j];
    res[j] = v;
  }
  sol.residual_symplectic = max_norm(res);
  sol.constraint_residuals.resize(r);
  for (int k = 0; k < r; ++k) {
    sol.constraint_residuals[k] = std::abs(pair(omega[k], sol.xi));
    sol.residual_constraints = std::max(sol.residual_constraints, sol.constraint_residuals[k]);
  }
  for (int i = 0; i < m; ++i) sol.semispray_defect = std::max(sol.semispray_defect, std::abs(sol.xi.hol[i] - s.w[i]));
  return sol;
}

std::vector<cplx> el_residual(const LagrangianSystem& sys, const PhaseState& s, const SemispraySolution& sol) {
  check_state(sys, s);
  const int m = sys.dimension();
  const int n = 2 * m;
  const int r = sys.constraint_count();
  const EvalPoint pt = s.point();
  const Evaluated ev = evaluate_derivatives(sys, pt);
  const std::vector<cplx> xi = sol.xi.packed();
  std::vector<cplx> out(n);
  for (int j = 0; j < n; ++j) {
    // d/dt dL/du_j along (xi, xibar)
    const cplx rate = kernels::dotu(ev.hess.row(j), xi);
    cplx v = j < m ? ev.grad[j] - times_i(rate) : ev.grad[j] + times_i(rate);
    for (int k = 0; k < r && k < static_cast<int>(sol.lambdas.size()); ++k)
      v -= sol.lambdas[k] * evaluate(sys.constraints()[k].form[j], pt);
    out[j] = v;
  }
  return out;
}

std::vector<cplx> unconstrained_el_residual(const LagrangianSystem& sys, const PhaseState& s,
                                            const VectorField& xi) {
  check_state(sys, s);
  const int m = sys.dimension();
  const int n = 2 * m;
  const Evaluated ev = evaluate_derivatives(sys, s.point());
  const std::vector<cplx> u = xi.packed();
  std::vector<cplx> out(n);
  for (int j = 0; j < n; ++j) {
    const cplx rate = times_i(kernels::dotu(ev.hess.row(j), u));
    out[j] = j < m ? rate - ev.grad[j] : rate + ev.grad[j];
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string solver_error_name(const std::exception& e) {
  if (dynamic_cast<const SingularKahlerMatrix*>(&e)) return "SingularKahlerMatrix";
  if (dynamic_cast<const InconsistentConstraints*>(&e)) return "InconsistentConstraints";
  if (dynamic_cast<const EvaluationDomainError*>(&e)) return "EvaluationDomainError";
  if (dynamic_cast<const SolveError*>(&e)) return "SolveError";
  return "Error";
}

Trajectory integrate(const LagrangianSystem& sys, const PhaseState& s0, double t1, double dt) {
  check_state(sys, s0);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
  if (!(t1 > s0.t) || !std::isfinite(t1)) throw InvalidArgument("t1 must exceed the initial time");
  if (!s0.finite()) throw InvalidArgument("initial state is not finite");

  const auto steps = static_cast<std::size_t>(std::floor((t1 - s0.t) / dt + 1e-9));
  Trajectory tr;
  tr.step = dt;
  tr.samples.reserve(steps + 1);

  double t = s0.t;
  auto fail = [&](const std::exception& e, double when) {
    tr.status.kind = TrajectoryStatus::Kind::SolverFailure;
    tr.status.time = when;
    tr.status.error = solver_error_name(e);
    tr.status.message = e.what();
  };

  PhaseState state = s0;
  SemispraySolution sol;
  try {
    sol = solve_semispray(sys, state);
    tr.samples.push_back({state, sol, energy(sys, state, sol.xi)});
  } catch (const Error& e) {
    fail(e, t);
    return tr;
  }

  const std::size_t n = static_cast<std::size_t>(2 * sys.dimension());
  std::vector<cplx> u = state.packed();
  std::vector<cplx> stage(n);
  std::vector<cplx> acc(n);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t_next = s0.t + static_cast<double>(k) * dt;
    double t_stage = t;
    try {
      std::vector<cplx> k1 = sol.xi.packed();
      acc = u;
      kernels::caxpy(acc, dt / 6.0, k1);

      stage = u;
      kernels::caxpy(stage, 0.5 * dt, k1);
      t_stage = t + 0.5 * dt;
      const std::vector<cplx> k2 = solve_semispray(sys, PhaseState::from_packed(t_stage, stage)).xi.packed();
      kernels::caxpy(acc, dt / 3.0, k2);

      stage = u;
      kernels::caxpy(stage, 0.5 * dt, k2);
      const std::vector<cplx> k3 = solve_semispray(sys, PhaseState::from_packed(t_stage, stage)).xi.packed();
      kernels::caxpy(acc, dt / 3.0, k3);

      stage = u;
      kernels::caxpy(stage, dt, k3);
      t_stage = t_next;
      const std::vector<cplx> k4 = solve_semispray(sys, PhaseState::from_packed(t_stage, stage)).xi.packed();
      kernels::caxpy(acc, dt / 6.0, k4);
    } catch (const Error& e) {
      fail(e, t_stage);
      return tr;
    }

    u = acc;
    t = t_next;
    state = PhaseState::from_packed(t, u);
    if (!state.finite()) {
      tr.status.kind = TrajectoryStatus::Kind::NonFinite;
      tr.status.time = t;
      tr.status.message = "non-finite state at t = " + fmt_time(t);
      return tr;
    }
    try {
      sol = solve_semispray(sys, state);
      tr.samples.push_back({state, sol, energy(sys, state, sol.xi)});
    } catch (const Error& e) {
      fail(e, t);
      return tr;
    }
  }
  return tr;
}

DiagnosticsReport diagnostics(const Trajectory& tr) {
  DiagnosticsReport rep;
  rep.samples = tr.samples.size();
  if (tr.samples.empty()) return rep;
  const cplx e0 = tr.samples.front().energy;
  double drift_sum = 0.0;
  double constraint_sum = 0.0;
  double defect_sum = 0.0;
  for (const auto& s : tr.samples) {
    const double drift = std::abs(s.energy - e0);
    rep.max_energy_drift = std::max(rep.max_energy_drift, drift);
    drift_sum += drift;
    rep.max_constraint_residual = std::max(rep.max_constraint_residual, s.solution.residual_constraints);
    constraint_sum += s.solution.residual_constraints;
    rep.max_symplectic_residual = std::max(rep.max_symplectic_residual, s.solution.residual_symplectic);
    rep.max_semispray_defect = std::max(rep.max_semispray_defect, s.solution.semispray_defect);
    defect_sum += s.solution.semispray_defect;
  }
  const double count = static_cast<double>(tr.samples.size());
  rep.mean_energy_drift = drift_sum / count;
  rep.mean_constraint_residual = constraint_sum / count;
  rep.mean_semispray_defect = defect_sum / count;
  return rep;
}

}  // namespace kahler
