// Acceptance suite: one [PASS]/[FAIL] line per criterion.
//
//   acceptance [--known-failure N]...
//
// Exit status is 0 when every criterion not listed as a known failure passes.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../support/desk.hpp"
#include "kahler/errors.hpp"
#include "kahler/real_oracle.hpp"
#include "kahler/verify.hpp"

using namespace kahler;
namespace fs = std::filesystem;

namespace tol {
constexpr double kStructure = 1e-15;
constexpr double kHermitian = 1e-12;
constexpr double kKahlerFd = 1e-6;
constexpr double kClosedness = 1e-6;
constexpr double kSolve = 1e-10;
constexpr double kElResidual = 1e-8;
constexpr double kEnergyDrift = 1e-6;
constexpr double kOrderLow = 8.0;
constexpr double kOrderHigh = 32.0;
constexpr double kConstraintDrift = 1e-8;
constexpr double kOracle = 1e-9;
constexpr double kBracket = 1e-8;
constexpr double kWitness = 0.9;
constexpr double kClassifyTol = 1e-8;
}  // namespace tol

namespace {

constexpr std::uint64_t kSeed = 20240601;
constexpr int kStates = 100;
constexpr double kT1 = 10.0;
constexpr double kDt = 1e-3;

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    details.push_back(std::string(ok ? "ok    " : "FAILED") + "  " + what);
  }
  void note(const std::string& what) { details.push_back("        " + what); }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

PhaseState random_state(BoxSampler& s, int m) {
  const EvalPoint p = s.point(m);
  return {0.0, p.z(), p.w()};
}

double max_abs(const std::vector<cplx>& v) {
  double r = 0.0;
  for (auto x : v) r = std::max(r, std::abs(x));
  return r;
}

VectorField random_vector(BoxSampler& s, int m) {
  VectorField v(m);
  for (auto& x : v.hol) x = s.complex();
  for (auto& x : v.fib) x = s.complex();
  return v;
}

Outcome structure_laws() {
  Outcome o;
  BoxSampler s(kSeed);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const int m = 1 + k % 4;
    const VectorField v = random_vector(s, m);
    const VectorField jj = apply_J_vector(apply_J_vector(v));
    OneForm a(m);
    for (int i = 0; i < m; ++i) {
      a.a[i] = s.complex();
      a.b[i] = s.complex();
    }
    const OneForm aa = apply_J_covector(apply_J_covector(a));
    for (int i = 0; i < m; ++i) {
      worst = std::max({worst, std::abs(jj.hol[i] + v.hol[i]), std::abs(jj.fib[i] + v.fib[i]),
                        std::abs(aa.a[i] + a.a[i]), std::abs(aa.b[i] + a.b[i])});
    }
  }
  o.require(worst <= tol::kStructure, "J^2 + Id over 1000 vectors and covectors: max " + sci(worst));
  return o;
}

Outcome hermitian() {
  Outcome o;
  BoxSampler s(kSeed + 1);
  std::vector<std::pair<VectorField, VectorField>> pairs;
  for (int k = 0; k < 1000; ++k) pairs.emplace_back(random_vector(s, 2), random_vector(s, 2));
  const auto rep = check_hermitian_compatibility(ComplexMatrix::identity(4), pairs);
  o.require(rep.samples == 1000 && rep.max_deviation <= tol::kHermitian,
            "identity metric, 1000 pairs: max |g(JX,JY) - g(X,Y)| " + sci(rep.max_deviation));
  return o;
}

Outcome kahler_form(const std::vector<desk::DeskSystem>& suite) {
  Outcome o;
  o.require(suite.size() >= 5, std::to_string(suite.size()) + " desk systems");
  BoxSampler s(kSeed + 2);
  for (const auto& d : suite) {
    double anti = 0.0, fd = 0.0, closed = 0.0;
    for (int k = 0; k < 20; ++k) {
      const EvalPoint p = s.point(d.system.dimension());
      anti = std::max(anti, antisymmetry_defect(d.system.kahler_form().evaluate(p)));
      anti = std::max(anti, antisymmetry_defect(assemble_kahler_matrix(d.system, {0.0, p.z(), p.w()})));
      fd = std::max(fd, kahler_fd_error(d.system, p));
      closed = std::max(closed, kahler_closedness_fd(d.system, p));
    }
    o.require(anti == 0.0 && fd <= tol::kKahlerFd && closed <= tol::kClosedness,
              d.name + ": antisymmetry " + sci(anti) + ", fd " + sci(fd) + ", dPhi " + sci(closed));
  }
  return o;
}

Outcome solve_consistency(const std::vector<desk::DeskSystem>& suite) {
  Outcome o;
  BoxSampler s(kSeed + 3);
  for (const auto& d : suite) {
    if (!d.solvable) {
      o.note(d.name + ": singular Kahler matrix, excluded");
      continue;
    }
    double sym = 0.0, cons = 0.0;
    int solved = 0;
    for (int k = 0; k < kStates; ++k) {
      try {
        const SemispraySolution sol = solve_semispray(d.system, random_state(s, d.system.dimension()));
        sym = std::max(sym, sol.residual_symplectic);
        cons = std::max(cons, sol.residual_constraints);
        ++solved;
      } catch (const SolveError&) {
      }
    }
    o.require(solved == kStates && sym <= tol::kSolve && cons <= tol::kSolve,
              d.name + ": " + std::to_string(solved) + "/" + std::to_string(kStates) + " solved, symplectic " +
                  sci(sym) + ", constraint " + sci(cons));
  }
  return o;
}

Outcome el_residuals(const std::vector<desk::DeskSystem>& suite) {
  Outcome o;
  BoxSampler s(kSeed + 4);
  for (const auto& d : suite) {
    if (!d.solvable) continue;
    const int m = d.system.dimension();
    double worst = 0.0, mismatch = 0.0;
    for (int k = 0; k < kStates; ++k) {
      const PhaseState st = random_state(s, m);
      const SemispraySolution sol = solve_semispray(d.system, st);
      const auto res = el_residual(d.system, st, sol);
      worst = std::max(worst, max_abs(res));
      if (d.system.constraint_count() == 0) {
        // z-rows carry the opposite overall sign
        const auto un = unconstrained_el_residual(d.system, st, sol.xi);
        for (int i = 0; i < m; ++i)
          mismatch = std::max({mismatch, std::abs(res[i] + un[i]), std::abs(res[m + i] - un[m + i])});
      }
    }
    std::string line = d.name + ": max residual " + sci(worst);
    if (d.system.constraint_count() == 0) line += ", vs unconstrained " + sci(mismatch);
    o.require(worst <= tol::kElResidual && mismatch <= tol::kElResidual, line);
  }
  return o;
}

struct Runs {
  std::string name;
  bool phase_invariant;
  Trajectory coarse;
  Trajectory fine;
};

std::vector<Runs> integrate_suite(const std::vector<desk::DeskSystem>& suite) {
  std::vector<Runs> out;
  BoxSampler s(kSeed + 5);
  for (const auto& d : suite) {
    if (!d.solvable) continue;
    const PhaseState s0 = random_state(s, d.system.dimension());
    out.push_back({d.name, d.phase_invariant, integrate(d.system, s0, kT1, kDt), integrate(d.system, s0, kT1, kDt / 2)});
  }
  return out;
}

Outcome energy_conservation(const std::vector<Runs>& runs) {
  Outcome o;
  for (const auto& r : runs) {
    const double a = diagnostics(r.coarse).max_energy_drift;
    const double b = diagnostics(r.fine).max_energy_drift;
    const double ratio = b > 0.0 ? a / b : INFINITY;
    const bool done = r.coarse.status.completed() && r.fine.status.completed();
    o.require(done && a <= tol::kEnergyDrift && ratio >= tol::kOrderLow && ratio <= tol::kOrderHigh,
              r.name + ": drift " + sci(a) + " (dt), " + sci(b) + " (dt/2), ratio " + sci(ratio) +
                  (r.phase_invariant ? ", L phase-invariant" : ""));
  }
  return o;
}

Outcome constraint_drift(const std::vector<Runs>& runs) {
  Outcome o;
  for (const auto& r : runs) {
    bool constrained = false;
    for (const auto& smp : r.coarse.samples) constrained |= !smp.solution.lambdas.empty();
    if (!constrained) continue;
    const double c = diagnostics(r.coarse).max_constraint_residual;
    o.require(r.coarse.status.completed() && c <= tol::kConstraintDrift,
              r.name + ": max |omega(xi)| " + sci(c) + " over " + std::to_string(r.coarse.samples.size()) +
                  " samples");
  }
  return o;
}

Outcome oracle(const std::vector<desk::DeskSystem>& suite) {
  Outcome o;
  BoxSampler s(kSeed + 6);
  for (const auto& d : suite) {
    if (!d.solvable) continue;
    double worst = 0.0;
    for (int k = 0; k < kStates; ++k) {
      const PhaseState st = random_state(s, d.system.dimension());
      const SemispraySolution a = solve_semispray(d.system, st);
      const SemispraySolution b = realify_and_solve(d.system, st);
      const auto xa = a.xi.packed(), xb = b.xi.packed();
      for (std::size_t i = 0; i < xa.size(); ++i) worst = std::max(worst, std::abs(xa[i] - xb[i]));
      for (std::size_t i = 0; i < a.lambdas.size(); ++i) worst = std::max(worst, std::abs(a.lambdas[i] - b.lambdas[i]));
    }
    o.require(worst <= tol::kOracle, d.name + ": max componentwise difference " + sci(worst));
  }
  return o;
}

ConstraintSet one_form(int m, const std::vector<std::string>& c) { return ConstraintSet(m, {desk::form(m, c)}); }

Outcome holonomy() {
  Outcome o;
  const Classification fixed = frobenius_test(one_form(1, {"1", "0"}), 50, kSeed, tol::kClassifyTol);
  o.require(fixed.verdict == Verdict::Closed, "dz1: " + verdict_name(fixed.verdict));

  const Classification slide = frobenius_test(one_form(2, {"w1", "0", "0", "0"}), 50, kSeed, tol::kClassifyTol);
  double min_w1 = INFINITY;
  for (const auto& e : slide.evidence) min_w1 = std::min(min_w1, std::abs(e.point.w()[0]));
  o.require(slide.verdict == Verdict::LocallyHolonomic && slide.max_bracket <= tol::kBracket &&
                slide.closedness.valid_samples == 50,
            "w1 dz1: " + verdict_name(slide.verdict) + ", max bracket " + sci(slide.max_bracket) + ", min |w1| " +
                sci(min_w1));

  const Classification contact =
      frobenius_test(one_form(3, {"-z2", "0", "1", "0", "0", "0"}), 50, kSeed, tol::kClassifyTol);
  const double best = contact.witnesses.empty() ? 0.0 : std::abs(contact.witnesses.front().value);
  o.require(contact.verdict == Verdict::Anholonomic && best >= tol::kWitness,
            "dz3 - z2 dz1: " + verdict_name(contact.verdict) + ", witness modulus " + sci(best));
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool same_tree(const fs::path& a, const fs::path& b, std::size_t& files) {
  files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    const fs::path other = b / e.path().filename();
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) return false;
    ++files;
  }
  return files > 0;
}

int shell(const std::string& cmd) { return std::system(cmd.c_str()); }

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

Outcome determinism() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / ("kahler_acceptance_" + std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
  const fs::path bin = KAHLER_BIN;
  const fs::path systems = KAHLER_SYSTEMS_DIR;
  for (int run = 0; run < 2; ++run) {
    const fs::path dir = root / ("run" + std::to_string(run));
    fs::create_directories(dir / "simulate");
    fs::create_directories(dir / "classify");
    const int a = shell(quote(bin) + " simulate --system " + quote(systems / "rolling.sys") + " --t1 1 --out " +
                        quote(dir / "simulate") + " > /dev/null");
    const int b = shell(quote(bin) + " classify --system " + quote(systems / "contact.sys") + " --seed 0 --out " +
                        quote(dir / "classify") + " > " + quote(dir / "classify" / "stdout.json"));
    o.require(a == 0 && b == 0, "run " + std::to_string(run + 1) + " exit codes " + std::to_string(a) + ", " +
                                    std::to_string(b));
  }
  std::size_t n1 = 0, n2 = 0;
  const bool sim = same_tree(root / "run0" / "simulate", root / "run1" / "simulate", n1);
  const bool cls = same_tree(root / "run0" / "classify", root / "run1" / "classify", n2);
  o.require(sim, "simulate: " + std::to_string(n1) + " files byte-identical");
  o.require(cls, "classify: " + std::to_string(n2) + " files byte-identical");
  fs::remove_all(root);
  return o;
}

Outcome degeneracy() {
  Outcome o;
  const LagrangianSystem deg = desk::make(1, "z1^2");
  bool singular = false;
  try {
    solve_semispray(deg, {0.0, {0.5}, {0.25}});
  } catch (const SingularKahlerMatrix&) {
    singular = true;
  }
  const Trajectory tr = integrate(deg, {0.0, {0.5}, {0.25}}, kT1, kDt);
  o.require(singular && tr.samples.empty() && tr.status.error == "SingularKahlerMatrix" && tr.status.time == 0.0,
            "z1^2: SingularKahlerMatrix at t = 0, " + std::to_string(tr.samples.size()) + " samples");

  const LagrangianSystem dup = desk::make(2, "z1*w1 + z2*w2 + (z1*w1)^2",
                                          {{"a", {"1", "0", "0", "0"}}, {"b", {"2", "0", "0", "0"}}});
  bool inconsistent = false;
  try {
    solve_semispray(dup, {0.0, {0.1, 0.2}, {0.3, 0.4}});
  } catch (const InconsistentConstraints&) {
    inconsistent = true;
  }
  const Classification c =
      frobenius_test(ConstraintSet::from_system(dup), 50, kSeed, tol::kClassifyTol);
  o.require(inconsistent && c.verdict == Verdict::Indeterminate,
            "{dz1, 2 dz1}: InconsistentConstraints on solve, " + verdict_name(c.verdict) + " on classification");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite"};
  std::vector<int> known;
  app.add_option("--known-failure", known, "Criterion expected to fail");
  CLI11_PARSE(app, argc, argv);
  const std::set<int> expected(known.begin(), known.end());

  const auto suite = desk::suite();
  const auto runs = integrate_suite(suite);

  struct Entry {
    int id;
    const char* title;
    Outcome outcome;
  };
  const std::vector<Entry> entries{
      {1, "structure laws", structure_laws()},
      {2, "Hermitian compatibility", hermitian()},
      {3, "Kahler form correctness", kahler_form(suite)},
      {4, "solve consistency", solve_consistency(suite)},
      {5, "constrained Euler-Lagrange residuals", el_residuals(suite)},
      {6, "energy conservation and RK4 order", energy_conservation(runs)},
      {7, "constraint drift", constraint_drift(runs)},
      {8, "oracle equivalence", oracle(suite)},
      {9, "holonomy classification", holonomy()},
      {10, "determinism", determinism()},
      {11, "degeneracy handling", degeneracy()},
  };

  int unexpected = 0;
  for (const auto& e : entries) {
    std::cout << (e.outcome.pass ? "[PASS] " : "[FAIL] ") << e.id << ". " << e.title;
    if (!e.outcome.pass && expected.count(e.id)) std::cout << " (known failure)";
    std::cout << "\n";
    for (const auto& d : e.outcome.details) std::cout << "         " << d << "\n";
    if (!e.outcome.pass && !expected.count(e.id)) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
