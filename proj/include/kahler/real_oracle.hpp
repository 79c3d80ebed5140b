#pragma once

// Real-coordinate verification path. Complex unknowns are split as x + iy and
// the saddle system is re-assembled and solved with Gauss-Jordan elimination
// (full pivoting), sharing no factorization code with the complex solver.

#include <vector>

#include "kahler/dynamics.hpp"
#include "kahler/linalg.hpp"

namespace kahler {

/// Row-major dense real matrix.
struct RealMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  RealMatrix() = default;
  RealMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// A + iB -> [A -B; B A].
RealMatrix realify(const ComplexMatrix& a);
/// Inverse of realify; reads the A and B blocks of the first block column.
ComplexMatrix complexify(const RealMatrix& r);
/// x + iy -> (x, y).
std::vector<double> realify(std::span<const cplx> v);
std::vector<cplx> complexify(std::span<const double> v);

struct GaussJordanResult {
  bool singular = false;
  std::vector<double> x;
  /// max |pivot| / min |pivot|
  double condition_estimate = 1.0;
  std::size_t rank = 0;
};

/// Solves M x = b. A pivot is zero when at most relative_threshold times the
/// largest entry of M.
GaussJordanResult gauss_jordan_solve(RealMatrix m, std::vector<double> b, double relative_threshold = 1e-12);

struct RealSplitSystem {
  int m = 0;
  int r = 0;
  /// 2(2m + r) square
  RealMatrix matrix;
  std::vector<double> rhs;
};

/// Assembles the saddle system directly from the Lagrangian Hessian.
RealSplitSystem build_real_split(const LagrangianSystem& sys, const PhaseState& s);

/// Same contract and errors as solve_semispray.
SemispraySolution realify_and_solve(const LagrangianSystem& sys, const PhaseState& s);

struct ClassicalElReport {
  bool real_expressible = false;
  std::size_t samples_checked = 0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  /// max_i |residual_i| at each interior sample
  std::vector<double> per_sample;
};

/// Residuals dL/dq - d/dt dL/dqdot - Lambda^a (omega_a)_q with q = z, qdot = w,
/// d/dt by central differences between neighbouring samples. Diagnostic only.
ClassicalElReport classical_el_check(const LagrangianSystem& sys, const Trajectory& tr);

/// True when L and every constraint coefficient have real literals only.
bool real_expressible(const LagrangianSystem& sys);

}  // namespace kahler
