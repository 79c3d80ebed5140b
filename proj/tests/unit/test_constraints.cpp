#include <doctest.h>

#include "../support/desk.hpp"
#include "kahler/errors.hpp"

using namespace kahler;

namespace {

ConstraintSet set(int m, const std::vector<std::vector<std::string>>& rows) {
  std::vector<SymbolicOneForm> forms;
  for (const auto& r : rows) forms.push_back(desk::form(m, r));
  return ConstraintSet(m, std::move(forms));
}

double max_annihilation(const ConstraintSet& cs, const EvalPoint& p, const std::vector<VectorField>& basis) {
  const ComplexMatrix c = cs.coefficients(p);
  double worst = 0.0;
  for (const auto& b : basis) {
    const auto u = b.packed();
    const auto v = c.multiply(u);
    for (auto x : v) worst = std::max(worst, std::abs(x));
  }
  return worst;
}

double orthonormality_defect(const std::vector<VectorField>& basis) {
  double worst = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const auto a = basis[i].packed(), b = basis[j].packed();
      cplx s{};
      for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
      worst = std::max(worst, std::abs(s - cplx(i == j ? 1.0 : 0.0)));
    }
  return worst;
}

}  // namespace

TEST_CASE("annihilator of coordinate covectors") {
  const auto b1 = annihilator_basis(set(1, {{"1", "0"}}), EvalPoint(1));
  REQUIRE(b1.size() == 1);
  CHECK(b1[0].hol[0] == cplx{});
  CHECK(std::abs(b1[0].fib[0]) == doctest::Approx(1.0));

  const auto b2 = annihilator_basis(set(2, {{"1", "0", "0", "0"}, {"0", "0", "1", "0"}}), EvalPoint(2));
  REQUIRE(b2.size() == 2);
  for (const auto& v : b2) {
    CHECK(v.hol[0] == cplx{});
    CHECK(v.fib[0] == cplx{});
  }
  CHECK(orthonormality_defect(b2) <= 1e-14);

  PhaseState s{0.0, {0.3}, {0.0}};
  CHECK_THROWS_AS(annihilator_basis(set(1, {{"w1", "0"}}), s), RankDeficientConstraints);
  CHECK_THROWS_AS(annihilator_basis(set(2, {{"1", "0", "0", "0"}, {"2", "0", "0", "0"}}), EvalPoint(2)),
                  RankDeficientConstraints);
}

TEST_CASE("annihilator basis is orthonormal and annihilates on the desk suite") {
  BoxSampler s(6);
  for (const auto& d : desk::suite()) {
    if (d.system.constraint_count() == 0) continue;
    const ConstraintSet cs = ConstraintSet::from_system(d.system);
    for (int k = 0; k < 50; ++k) {
      const EvalPoint p = s.point(cs.dimension());
      const auto basis = annihilator_basis(cs, p);
      INFO(d.name);
      CHECK(static_cast<int>(basis.size()) == 2 * cs.dimension() - cs.size());
      CHECK(max_annihilation(cs, p, basis) <= 1e-10);
      CHECK(orthonormality_defect(basis) <= 1e-12);
    }
  }
}

TEST_CASE("constraint set validation") {
  CHECK_THROWS_AS(ConstraintSet(1, {}), InvalidArgument);
  CHECK_THROWS_AS(set(1, {{"1", "0"}, {"0", "1"}}), InvalidArgument);
  CHECK_THROWS_AS(set(1, {{"conj(z1)", "0"}}), NonHolomorphicInput);
}

TEST_CASE("closedness examples") {
  CHECK(closedness_test(set(1, {{"1", "0"}}), 50, 0, 1e-8).closed[0]);
  CHECK(closedness_test(set(1, {{"z1", "0"}}), 50, 0, 1e-8).closed[0]);
  const ClosednessReport open = closedness_test(set(1, {{"w1", "0"}}), 50, 0, 1e-8);
  CHECK_FALSE(open.closed[0]);
  CHECK(open.measure[0] > 0.5);
  CHECK(open.valid_samples == 50);
  CHECK_THROWS_AS(closedness_test(set(1, {{"1", "0"}}), 0, 0, 1e-8), InvalidArgument);
}

TEST_CASE("closedness skips domain errors") {
  // a pole on every sample
  const ConstraintSet cs = set(1, {{"1/(z1 - z1)", "0"}});
  CHECK_THROWS_AS(closedness_test(cs, 5, 0, 1e-8), EvaluationDomainError);
}

TEST_CASE("closedness verdict is invariant under constant rescaling") {
  const std::vector<std::vector<std::string>> forms{{"1", "0", "0", "0"},       {"z1", "0", "0", "0"},
                                                    {"w1", "0", "0", "0"},      {"0", "1", "-z1", "0"},
                                                    {"z2", "z1", "0", "0"},     {"exp(z1)", "0", "w2", "0"}};
  for (const auto& f : forms) {
    const bool base = closedness_test(set(2, {f}), 50, 3, 1e-8).closed[0];
    for (const char* c : {"0.001", "0.1", "10", "1000", "-1000", "3i"}) {
      std::vector<std::string> scaled;
      for (const auto& e : f) scaled.push_back(std::string(c) + "*(" + e + ")");
      INFO(f[0], " scaled by ", c);
      CHECK(closedness_test(set(2, {scaled}), 50, 3, 1e-8).closed[0] == base);
    }
  }
}

TEST_CASE("frobenius examples") {
  CHECK(frobenius_test(set(1, {{"1", "0"}}), 50, 0, 1e-8).verdict == Verdict::Closed);

  const Classification sliding = frobenius_test(set(2, {{"w1", "0", "0", "0"}}), 50, 0, 1e-8);
  CHECK(sliding.verdict == Verdict::LocallyHolonomic);
  CHECK(sliding.witnesses.empty());
  CHECK(sliding.max_bracket <= 1e-8);

  const Classification contact = frobenius_test(set(3, {{"-z2", "0", "1", "0", "0", "0"}}), 50, 0, 1e-8);
  CHECK(contact.verdict == Verdict::Anholonomic);
  REQUIRE_FALSE(contact.witnesses.empty());
  CHECK(contact.witnesses.front().measure > 1e-8);
  for (std::size_t k = 1; k < contact.witnesses.size(); ++k)
    CHECK(contact.witnesses[k - 1].measure >= contact.witnesses[k].measure);
}

TEST_CASE("explicit contact witness pair") {
  // X = d/dz2, Y = d/dz1 + z2 d/dz3 lie in D and d omega(X, Y) = -1
  const ConstraintSet cs = set(3, {{"-z2", "0", "1", "0", "0", "0"}});
  const SymbolicTwoForm dw = exterior_derivative(cs.forms()[0]);
  BoxSampler s(8);
  for (int k = 0; k < 20; ++k) {
    const EvalPoint p = s.point(3);
    const cplx z2 = p.z()[1];
    VectorField x(3), y(3);
    x.hol[1] = 1.0;
    y.hol[0] = 1.0;
    y.hol[2] = z2;
    const OneForm w = evaluate(cs.forms()[0], p);
    CHECK(std::abs(pair(w, x)) <= 1e-15);
    CHECK(std::abs(pair(w, y)) <= 1e-15);
    CHECK(std::abs(evaluate_two_form(dw, x, y, p) - cplx{-1.0, 0.0}) <= 1e-15);
  }
}

TEST_CASE("the witness reported lies in D") {
  const ConstraintSet cs = set(3, {{"-z2", "0", "1", "0", "0", "0"}});
  const Classification c = frobenius_test(cs, 20, 4, 1e-8);
  for (const auto& w : c.witnesses) {
    const OneForm f = evaluate(cs.forms()[0], w.point);
    CHECK(std::abs(pair(f, w.x)) <= 1e-10);
    CHECK(std::abs(pair(f, w.y)) <= 1e-10);
    const SymbolicTwoForm dw = exterior_derivative(cs.forms()[0]);
    CHECK(std::abs(evaluate_two_form(dw, w.x, w.y, w.point) - w.value) <= 1e-12);
  }
}

TEST_CASE("verdict is invariant under constant recombination") {
  struct Case {
    int m;
    std::vector<std::vector<std::string>> rows;
  };
  const std::vector<Case> cases{
      {2, {{"0", "1", "-z1", "0"}, {"1", "0", "0", "0"}}},
      {2, {{"1", "0", "0", "0"}, {"0", "0", "1", "0"}}},
      {3, {{"1", "0", "0", "0", "0", "0"}, {"0", "0", "1", "-z2", "0", "0"}}},
      {3, {{"-z2", "0", "1", "0", "0", "0"}, {"0", "1", "0", "0", "0", "0"}}},
      {2, {{"w1", "0", "0", "0"}, {"0", "w2", "0", "0"}}},
  };
  for (const auto& c : cases) {
    const Verdict base = frobenius_test(set(c.m, c.rows), 50, 2, 1e-8).verdict;
    // (a, b) -> (2a + 3i b, a - b)
    std::vector<std::string> r0, r1;
    for (std::size_t p = 0; p < c.rows[0].size(); ++p) {
      r0.push_back("2*(" + c.rows[0][p] + ") + 3i*(" + c.rows[1][p] + ")");
      r1.push_back("(" + c.rows[0][p] + ") - (" + c.rows[1][p] + ")");
    }
    const Verdict mixed = frobenius_test(set(c.m, {r0, r1}), 50, 2, 1e-8).verdict;
    CHECK(base == mixed);
  }
}

TEST_CASE("closed verdict implies the bracket evidence passes") {
  const std::vector<std::vector<std::vector<std::string>>> closed_sets{
      {{"1", "0", "0", "0"}}, {{"z1", "0", "0", "0"}, {"0", "0", "0", "1"}}, {{"w2", "0", "0", "z1"}}};
  for (const auto& rows : closed_sets) {
    const Classification c = frobenius_test(set(2, rows), 50, 1, 1e-8);
    CHECK(c.verdict == Verdict::Closed);
    CHECK(c.max_bracket <= 1e-8);
    CHECK(c.witnesses.empty());
  }
}

TEST_CASE("rank deficiency everywhere is indeterminate") {
  const Classification c = frobenius_test(set(2, {{"1", "0", "0", "0"}, {"2", "0", "0", "0"}}), 20, 0, 1e-8);
  // both forms are closed, but nothing can be said about D
  CHECK(c.rank_deficient_samples == 20);
  CHECK(c.verdict == Verdict::Indeterminate);
}

TEST_CASE("basic forms") {
  CHECK(is_basic(desk::form(2, {"z2", "1", "0", "0"})));
  CHECK_FALSE(is_basic(desk::form(2, {"w1", "0", "0", "0"})));
  CHECK_FALSE(is_basic(desk::form(2, {"1", "0", "0", "1"})));
  CHECK(verdict_name(Verdict::LocallyHolonomic) == "LocallyHolonomic");
}

TEST_CASE("sampler is deterministic and stays in the box") {
  BoxSampler a(42), b(42);
  for (int k = 0; k < 1000; ++k) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= -1.0);
    CHECK(x < 1.0);
  }
}
