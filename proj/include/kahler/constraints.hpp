#pragma once

// Constraint 1-forms, their annihilator distribution and sampled holonomy
// classification.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "kahler/dynamics.hpp"
#include "kahler/exterior.hpp"

namespace kahler {

class ConstraintSet {
 public:
  /// Requires 1 <= r <= 2m - 1 and holomorphic coefficients over z1..zm, w1..wm.
  ConstraintSet(int m, std::vector<SymbolicOneForm> forms, std::vector<std::string> names = {});
  static ConstraintSet from_system(const LagrangianSystem& sys);

  int dimension() const { return m_; }
  int size() const { return static_cast<int>(forms_.size()); }
  const std::vector<SymbolicOneForm>& forms() const { return forms_; }
  const std::vector<std::string>& names() const { return names_; }

  /// r x 2m coefficient matrix at a point.
  ComplexMatrix coefficients(const EvalPoint& p) const;

 private:
  int m_;
  std::vector<SymbolicOneForm> forms_;
  std::vector<std::string> names_;
};

/// Uniform samples from [-1,1] x [-1,1]i per coordinate. The mapping from the
/// 64-bit engine output is fixed, so sequences are portable.
class BoxSampler {
 public:
  explicit BoxSampler(std::uint64_t seed) : engine_(seed) {}
  double uniform();  // [-1, 1)
  cplx complex();
  EvalPoint point(int m);

 private:
  std::mt19937_64 engine_;
};

/// Orthonormal basis of D = { v : omega_a(v) = 0 } under the standard
/// Hermitian product. Throws RankDeficientConstraints.
std::vector<VectorField> annihilator_basis(const ConstraintSet& cs, const PhaseState& s);
std::vector<VectorField> annihilator_basis(const ConstraintSet& cs, const EvalPoint& p);

struct ClosednessReport {
  std::vector<bool> closed;
  /// Largest |d omega_a| entry over the samples, divided by the largest
  /// coefficient modulus of omega_a at the same point.
  std::vector<double> measure;
  std::size_t valid_samples = 0;
  std::size_t skipped_samples = 0;
  std::vector<std::string> warnings;
};

/// Throws InvalidArgument for samples < 1 and EvaluationDomainError when no
/// sample could be evaluated.
ClosednessReport closedness_test(const ConstraintSet& cs, int samples, std::uint64_t seed, double tol);

enum class Verdict { Closed, LocallyHolonomic, Anholonomic, Indeterminate };
std::string verdict_name(Verdict v);

struct WitnessPair {
  int form = 0;
  EvalPoint point;
  VectorField x;
  VectorField y;
  /// d omega_a(X, Y)
  cplx value;
  /// |value| divided by the largest coefficient modulus of omega_a at the point
  double measure = 0.0;
};

struct SampleEvidence {
  EvalPoint point;
  bool rank_deficient = false;
  bool evaluation_failed = false;
  /// max over forms and basis pairs of the normalized |d omega_a(X, Y)|
  double max_bracket = 0.0;
};

struct Classification {
  Verdict verdict = Verdict::Indeterminate;
  ClosednessReport closedness;
  std::vector<SampleEvidence> evidence;
  /// Largest witness per sample, sorted by decreasing measure.
  std::vector<WitnessPair> witnesses;
  double max_bracket = 0.0;
  std::size_t rank_deficient_samples = 0;
};

Classification frobenius_test(const ConstraintSet& cs, int samples, std::uint64_t seed, double tol);

/// Zero dw-coefficients and coefficients that depend on positions only.
bool is_basic(const SymbolicOneForm& form);

}  // namespace kahler
