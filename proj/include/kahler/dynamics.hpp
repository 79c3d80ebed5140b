#pragma once

// Constrained Lagrangian dynamics on the Kähler chart.
//
// At a state s the semispray xi and multipliers Lambda solve
//
//     i_xi Phi_L - dE_L(xi) - Lambda^a omega_a = 0,     omega_a(xi) = 0,
//
// where Phi_L = -d d_J L and dE_L is the differential of
// E_L = i xi^i dL/dz_i - i xibar^i dL/dw_i - L taken with xi held fixed.
// dE_L is affine in xi, so the system is a (2m + r) square complex saddle
// problem in (xi, Lambda).

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "kahler/exterior.hpp"
#include "kahler/expr.hpp"

namespace kahler {

struct NamedForm {
  std::string name;
  SymbolicOneForm form;
};

/// A Lagrangian with constraint 1-forms. Derivatives of L are computed once at
/// construction and shared between copies.
class LagrangianSystem {
 public:
  /// Throws InvalidArgument (or NonHolomorphicInput) when r > 2m - 1, when a
  /// symbol lies outside the dimension, or when conj/re/im acts on a
  /// coordinate inside L or a constraint coefficient.
  LagrangianSystem(int m, Expr lagrangian, std::vector<NamedForm> constraints = {},
                   std::vector<std::string> labels = {});

  int dimension() const;
  int constraint_count() const;
  const Expr& lagrangian() const;
  const std::vector<NamedForm>& constraints() const;
  const std::vector<std::string>& labels() const;

  /// dL/du_p over the ordered coordinates (z1..zm, w1..wm).
  const std::vector<Expr>& gradient() const;
  const Expr& hessian(int p, int q) const;
  /// Phi_L = -d d_J L.
  const SymbolicTwoForm& kahler_form() const;

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
};

struct PhaseState {
  double t = 0.0;
  std::vector<cplx> z;
  std::vector<cplx> w;

  static PhaseState from_packed(double t, std::span<const cplx> u);
  int dimension() const { return static_cast<int>(z.size()); }
  EvalPoint point() const { return EvalPoint(z, w); }
  std::vector<cplx> packed() const;
  bool finite() const;
};

struct SemispraySolution {
  VectorField xi;
  std::vector<cplx> lambdas;
  /// max-norm of i_xi Phi_L - dE_L - Lambda^a omega_a
  double residual_symplectic = 0.0;
  /// max_a |omega_a(xi)|
  double residual_constraints = 0.0;
  /// max_i |xi^i - w^i|
  double semispray_defect = 0.0;
  /// pivot-ratio estimate of the saddle matrix
  double condition_estimate = 1.0;
  /// |omega_a(xi)| per constraint
  std::vector<double> constraint_residuals;
};

/// T - P with T = 1/2 sum m_i w_i^2. Throws InvalidArgument for a nonpositive
/// mass or a potential that uses velocity symbols.
Expr build_standard_lagrangian(std::span<const double> masses, const Expr& potential);

TwoForm assemble_kahler_matrix(const LagrangianSystem& sys, const PhaseState& s);

cplx energy(const LagrangianSystem& sys, const PhaseState& s, const VectorField& xi);
OneForm energy_differential(const LagrangianSystem& sys, const PhaseState& s, const VectorField& xi);

/// Throws SingularKahlerMatrix or InconsistentConstraints.
SemispraySolution solve_semispray(const LagrangianSystem& sys, const PhaseState& s);

/// Residuals of the constrained complex Euler-Lagrange equations, packed as
/// (z-equations, w-equations), with d/dt expanded along (xi, xibar).
std::vector<cplx> el_residual(const LagrangianSystem& sys, const PhaseState& s, const SemispraySolution& sol);

/// Residuals of the unconstrained equations
///   i d/dt(dL/dz_i) - dL/dz_i,   i d/dt(dL/dw_i) + dL/dw_i.
std::vector<cplx> unconstrained_el_residual(const LagrangianSystem& sys, const PhaseState& s,
                                            const VectorField& xi);

struct TrajectoryStatus {
  enum class Kind { Completed, SolverFailure, NonFinite };
  Kind kind = Kind::Completed;
  /// Time of the failing solve or of the first non-finite state.
  double time = 0.0;
  /// "SingularKahlerMatrix", "InconsistentConstraints", "EvaluationDomainError", or empty.
  std::string error;
  std::string message;

  bool completed() const { return kind == Kind::Completed; }
};

struct TrajectorySample {
  PhaseState state;
  SemispraySolution solution;
  cplx energy;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double step = 0.0;
  TrajectoryStatus status;
};

/// Fixed-step RK4 on (z' = xi_hol, w' = xi_fib), re-solving the saddle system
/// at every stage. Sample times are s0.t + k dt for k = 0..floor((t1 - s0.t)/dt).
/// Solver failures end the trajectory and are reported in `status`; a failure
/// at s0 yields zero samples. Throws InvalidArgument for dt <= 0 or t1 <= s0.t.
Trajectory integrate(const LagrangianSystem& sys, const PhaseState& s0, double t1, double dt);

struct DiagnosticsReport {
  std::size_t samples = 0;
  double max_energy_drift = 0.0;
  double mean_energy_drift = 0.0;
  double max_constraint_residual = 0.0;
  double mean_constraint_residual = 0.0;
  double max_symplectic_residual = 0.0;
  double max_semispray_defect = 0.0;
  double mean_semispray_defect = 0.0;
};

DiagnosticsReport diagnostics(const Trajectory& tr);

/// Name of a solver error type for reporting.
std::string solver_error_name(const std::exception& e);

}  // namespace kahler
