#include <doctest.h>

#include <cmath>

#include "../support/desk.hpp"
#include "kahler/errors.hpp"
#include "kahler/verify.hpp"

using namespace kahler;

namespace {

PhaseState state1(cplx z, cplx w) { return {0.0, {z}, {w}}; }

PhaseState random_state(BoxSampler& s, int m) {
  const EvalPoint p = s.point(m);
  return {0.0, p.z(), p.w()};
}

double max_abs(const std::vector<cplx>& v) {
  double r = 0.0;
  for (auto x : v) r = std::max(r, std::abs(x));
  return r;
}

}  // namespace

TEST_CASE("standard Lagrangian") {
  const std::vector<double> one{1.0};
  const Expr l = build_standard_lagrangian(one, Expr());
  CHECK(evaluate(l, EvalPoint({cplx{}}, {cplx{3.0, 0.0}})) == cplx{4.5, 0.0});

  const std::vector<double> two{2.0, 3.0};
  const Expr l2 = build_standard_lagrangian(two, Expr());
  const EvalPoint p({cplx{}, cplx{}}, {cplx{0.3, 0.1}, cplx{-0.2, 0.5}});
  const cplx w1{0.3, 0.1}, w2{-0.2, 0.5};
  CHECK(std::abs(evaluate(l2, p) - (w1 * w1 + 1.5 * w2 * w2)) < 1e-15);

  const Expr l3 = build_standard_lagrangian(one, Expr(Symbol::z(1)));
  CHECK(evaluate(l3, EvalPoint({cplx{1.0, 0.0}}, {cplx{2.0, 0.0}})) == cplx{1.0, 0.0});

  const std::vector<double> bad{1.0, 0.0};
  CHECK_THROWS_AS(build_standard_lagrangian(bad, Expr()), InvalidArgument);
  CHECK_THROWS_AS(build_standard_lagrangian(one, Expr(Symbol::w(1))), InvalidArgument);
}

TEST_CASE("system construction gates") {
  CHECK_THROWS_AS(LagrangianSystem(1, parse_expression("conj(z1)*w1", 1)), NonHolomorphicInput);
  CHECK_THROWS_AS(LagrangianSystem(1, parse_expression("z2", 2)), InvalidArgument);
  std::vector<NamedForm> many;
  for (int k = 0; k < 2; ++k) many.push_back({"c" + std::to_string(k), desk::form(1, {"1", "0"})});
  CHECK_THROWS_AS(LagrangianSystem(1, parse_expression("z1*w1", 1), many), InvalidArgument);
  std::vector<NamedForm> nonhol{{"c", desk::form(1, {"re(w1)", "0"})}};
  CHECK_THROWS_AS(LagrangianSystem(1, parse_expression("z1*w1", 1), nonhol), NonHolomorphicInput);
}

TEST_CASE("Kahler matrix examples") {
  CHECK(assemble_kahler_matrix(desk::make(1, "0"), state1(0.3, 0.2)).matrix().max_abs() == 0.0);
  CHECK(assemble_kahler_matrix(desk::make(1, "z1^2"), state1(0.3, 0.2)).matrix().max_abs() == 0.0);
  CHECK(assemble_kahler_matrix(desk::make(1, "0.5*w1^2 - z1^2"), state1(0.3, 0.2)).matrix().max_abs() == 0.0);

  const TwoForm k = assemble_kahler_matrix(desk::make(1, "z1*w1"), state1(0.3, 0.2));
  // both cross terms land on (dz1, dw1): -(-i - i) = 2i
  CHECK(k(0, 1) == cplx{0.0, 2.0});
  CHECK(k(1, 0) == cplx{0.0, -2.0});

  const TwoForm k2 = assemble_kahler_matrix(desk::make(2, "z1*w2 + z1*z2 + w1*w2"), {0.0, {0.1, 0.2}, {0.3, 0.4}});
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) {
      CHECK(k2(p, q) == cplx{});
      CHECK(k2(2 + p, 2 + q) == cplx{});
    }
  CHECK(k2(0, 3) == cplx{0.0, 2.0});
}

TEST_CASE("Kahler matrix against finite differences on the desk suite") {
  BoxSampler s(1);
  for (const auto& d : desk::suite()) {
    for (int k = 0; k < 10; ++k) {
      const EvalPoint p = s.point(d.system.dimension());
      const TwoForm phi = d.system.kahler_form().evaluate(p);
      INFO(d.name);
      CHECK(antisymmetry_defect(phi) == 0.0);
      CHECK(kahler_fd_error(d.system, p) <= 1e-6);
      CHECK(kahler_closedness_fd(d.system, p) <= 1e-6);
    }
  }
}

TEST_CASE("energy examples") {
  const LagrangianSystem zero = desk::make(1, "0");
  CHECK(energy(zero, state1(0.5, 0.5), VectorField({cplx{1.0, 2.0}}, {cplx{3.0, 0.0}})) == cplx{});
  const LagrangianSystem c = desk::make(1, "2.5");
  CHECK(energy(c, state1(0.5, 0.5), VectorField({cplx{1.0, 2.0}}, {cplx{3.0, 0.0}})) == cplx{-2.5, 0.0});
  const LagrangianSystem rot = desk::make(1, "z1*w1");
  CHECK(energy(rot, state1(1.0, 2.0), VectorField({cplx{2.0, 0.0}}, {cplx{}})) == cplx{-2.0, 4.0});
}

TEST_CASE("energy differential") {
  const OneForm z = energy_differential(desk::make(1, "0"), state1(0.1, 0.2), VectorField({1.0}, {1.0}));
  CHECK(z.a[0] == cplx{});
  CHECK(z.b[0] == cplx{});
  const OneForm lin = energy_differential(desk::make(1, "3*z1"), state1(0.1, 0.2), VectorField({1.0}, {2.0}));
  CHECK(lin.a[0] == cplx{-3.0, 0.0});
  CHECK(lin.b[0] == cplx{});

  BoxSampler s(2);
  for (const auto& d : desk::suite()) {
    for (int k = 0; k < 10; ++k) {
      const PhaseState st = random_state(s, d.system.dimension());
      const EvalPoint xiv = s.point(d.system.dimension());
      const VectorField xi(xiv.z(), xiv.w());
      INFO(d.name);
      CHECK(energy_differential_fd_error(d.system, st, xi) <= 1e-6);
    }
  }
}

TEST_CASE("semispray solve on the rotor") {
  const LagrangianSystem rot = desk::make(1, "z1*w1");
  const PhaseState st = state1({0.3, 0.1}, {-0.2, 0.4});
  const SemispraySolution sol = solve_semispray(rot, st);
  CHECK(sol.residual_symplectic <= 1e-10);
  CHECK(sol.lambdas.empty());
  // L invariant under the phase rotation: xi = (i z, -i w)
  CHECK(std::abs(sol.xi.hol[0] - cplx{0.0, 1.0} * st.z[0]) < 1e-15);
  CHECK(std::abs(sol.xi.fib[0] + cplx{0.0, 1.0} * st.w[0]) < 1e-15);
  CHECK(sol.semispray_defect == doctest::Approx(std::abs(cplx{0.0, 1.0} * st.z[0] - st.w[0])));
}

TEST_CASE("solve consistency on the desk suite") {
  BoxSampler s(3);
  for (const auto& d : desk::suite()) {
    if (!d.solvable) continue;
    for (int k = 0; k < 50; ++k) {
      const PhaseState st = random_state(s, d.system.dimension());
      const SemispraySolution sol = solve_semispray(d.system, st);
      INFO(d.name);
      CHECK(sol.residual_symplectic <= 1e-10);
      CHECK(sol.residual_constraints <= 1e-10);
      CHECK(static_cast<int>(sol.lambdas.size()) == d.system.constraint_count());
      // dE_L(xi) = -Lambda^a omega_a(xi) = 0 at solved states
      CHECK(std::abs(pair(energy_differential(d.system, st, sol.xi), sol.xi)) <= 1e-9);
      CHECK(max_abs(el_residual(d.system, st, sol)) <= 1e-8);
      if (d.system.constraint_count() == 0) {
        // the z-rows differ by sign, the w-rows agree
        const auto a = el_residual(d.system, st, sol);
        const auto b = unconstrained_el_residual(d.system, st, sol.xi);
        const int m = d.system.dimension();
        for (int i = 0; i < m; ++i) {
          CHECK(std::abs(a[i] + b[i]) <= 1e-12);
          CHECK(std::abs(a[m + i] - b[m + i]) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("constraint dz1 is enforced") {
  std::vector<NamedForm> cs{{"fix", desk::form(2, {"1", "0", "0", "0"})}};
  const LagrangianSystem sys(2, parse_expression("z1*w1 + z2*w2 + (z1*w1)^2", 2), cs);
  BoxSampler s(4);
  for (int k = 0; k < 20; ++k) {
    const SemispraySolution sol = solve_semispray(sys, random_state(s, 2));
    CHECK(std::abs(sol.xi.hol[0]) <= 1e-10);
    CHECK(sol.residual_constraints <= 1e-10);
  }
}

TEST_CASE("singular and inconsistent systems") {
  try {
    solve_semispray(desk::make(1, "z1^2"), state1(0.5, 0.5));
    FAIL("expected SingularKahlerMatrix");
  } catch (const SingularKahlerMatrix& e) {
    CHECK(std::isinf(e.condition_estimate()));
  }
  CHECK_THROWS_AS(solve_semispray(desk::make(1, "0"), state1(0.5, 0.5)), SingularKahlerMatrix);
  CHECK_THROWS_AS(solve_semispray(desk::make(1, "0.5*w1^2 - z1^2"), state1(0.5, 0.5)), SingularKahlerMatrix);

  std::vector<NamedForm> dup{{"a", desk::form(2, {"1", "0", "0", "0"})}, {"b", desk::form(2, {"2", "0", "0", "0"})}};
  const LagrangianSystem sys(2, parse_expression("z1*w1 + z2*w2", 2), dup);
  CHECK_THROWS_AS(solve_semispray(sys, {0.0, {0.1, 0.2}, {0.3, 0.4}}), InconsistentConstraints);

  // bilinear L with an odd number of constraints: antisymmetric saddle block
  std::vector<NamedForm> one{{"a", desk::form(2, {"1", "0", "0", "0"})}};
  const LagrangianSystem odd(2, parse_expression("z1*w1 + z2*w2", 2), one);
  CHECK_THROWS_AS(solve_semispray(odd, {0.0, {0.1, 0.2}, {0.3, 0.4}}), InconsistentConstraints);
}

TEST_CASE("integration") {
  const LagrangianSystem rot = desk::make(1, "z1*w1");
  const PhaseState s0 = state1({0.6, 0.2}, {-0.1, 0.4});
  const Trajectory tr = integrate(rot, s0, 1.0, 0.1);
  CHECK(tr.status.completed());
  CHECK(tr.samples.size() == 11);
  for (std::size_t k = 1; k < tr.samples.size(); ++k)
    CHECK(tr.samples[k].state.t == doctest::Approx(0.1 * static_cast<double>(k)).epsilon(1e-14));
  // exact flow z(t) = e^{it} z0
  const cplx exact = std::exp(cplx{0.0, 1.0}) * s0.z[0];
  CHECK(std::abs(tr.samples.back().state.z[0] - exact) < 1e-6);
  CHECK(diagnostics(tr).max_energy_drift < 1e-6);

  const Trajectory odd = integrate(rot, s0, 1.0, 0.3);
  CHECK(odd.samples.size() == 4);

  CHECK_THROWS_AS(integrate(rot, s0, 1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(integrate(rot, s0, 0.0, 0.1), InvalidArgument);

  const Trajectory bad = integrate(desk::make(1, "z1^2"), s0, 1.0, 0.1);
  CHECK(bad.status.kind == TrajectoryStatus::Kind::SolverFailure);
  CHECK(bad.status.error == "SingularKahlerMatrix");
  CHECK(bad.status.time == 0.0);
  CHECK(bad.samples.empty());
}

TEST_CASE("integration records non-finite blow-up") {
  // xi = -i w^2 ... grows without bound for this L
  const LagrangianSystem sys = desk::make(1, "z1*w1 + exp(z1*w1)*z1^4");
  const Trajectory tr = integrate(sys, state1({3.0, 0.0}, {2.0, 0.0}), 50.0, 0.5);
  CHECK((tr.status.completed() || tr.status.kind == TrajectoryStatus::Kind::NonFinite ||
         tr.status.kind == TrajectoryStatus::Kind::SolverFailure));
  if (!tr.status.completed()) CHECK(tr.status.time > 0.0);
}

TEST_CASE("constraint drift along constrained trajectories") {
  for (const auto& d : desk::suite()) {
    if (!d.solvable || d.system.constraint_count() == 0) continue;
    BoxSampler s(5);
    const Trajectory tr = integrate(d.system, random_state(s, d.system.dimension()), 1.0, 1e-2);
    INFO(d.name);
    CHECK(tr.status.completed());
    CHECK(diagnostics(tr).max_constraint_residual <= 1e-8);
  }
}

TEST_CASE("diagnostics") {
  const LagrangianSystem rot = desk::make(1, "z1*w1");
  Trajectory one = integrate(rot, state1(0.5, 0.5), 0.01, 0.1);
  CHECK(one.samples.size() == 1);
  CHECK(diagnostics(one).max_energy_drift == 0.0);

  Trajectory tr = integrate(rot, state1(0.5, 0.5), 1.0, 0.1);
  tr.samples[5].energy += 1.0;
  const DiagnosticsReport rep = diagnostics(tr);
  CHECK(rep.max_energy_drift >= 1.0 - 1e-12);
  CHECK(rep.samples == 11);
}

TEST_CASE("contraction of the rotor form against direct summation") {
  // K from the closed form K(z_i, w_j) = 2i d^2L/dz_i dw_j
  const LagrangianSystem rot = desk::make(1, "z1*w1");
  const TwoForm k = assemble_kahler_matrix(rot, state1(0.4, -0.3));
  const VectorField v({cplx{1.0, 0.0}}, {cplx{1.0, 0.0}});
  const OneForm c = contract(k, v);
  const cplx h = 1.0;
  const cplx direct_z = -2.0 * cplx{0.0, 1.0} * h * v.fib[0];
  const cplx direct_w = 2.0 * cplx{0.0, 1.0} * h * v.hol[0];
  CHECK(c.a[0] == direct_z);
  CHECK(c.b[0] == direct_w);
}
