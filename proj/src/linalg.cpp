#include "kahler/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "kahler/errors.hpp"
#include "kahler/kernels.hpp"

namespace kahler {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t k = 0; k < n; ++k) m(k, k) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

std::vector<cplx> ComplexMatrix::multiply(std::span<const cplx> x) const {
  if (x.size() != cols_) throw DimensionMismatch("ComplexMatrix::multiply: dimension mismatch");
  std::vector<cplx> y(rows_);
  for (std::size_t r = 0; r < rows_; ++r) y[r] = kernels::dotu(row(r), x);
  return y;
}

double ComplexMatrix::max_abs() const { return kernels::max_abs(data_); }

LuFactorization::LuFactorization(ComplexMatrix a, double relative_threshold)
    : lu_(std::move(a)), perm_(lu_.rows()) {
  const std::size_t n = lu_.rows();
  if (lu_.cols() != n) throw DimensionMismatch("LuFactorization: matrix not square");
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  const double threshold = relative_threshold * lu_.max_abs();
  double max_pivot = 0.0;
  double min_pivot = std::numeric_limits<double>::infinity();

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t r = k + 1; r < n; ++r) {
      const double v = std::abs(lu_(r, k));
      if (v > best) {
        best = v;
        p = r;
      }
    }
    if (!(best > threshold)) {
      singular_ = true;
      condition_estimate_ = std::numeric_limits<double>::infinity();
      return;
    }
    if (p != k) {
      std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(p).begin());
      std::swap(perm_[k], perm_[p]);
    }
    max_pivot = std::max(max_pivot, best);
    min_pivot = std::min(min_pivot, best);

    const cplx pivot = lu_(k, k);
    auto pivot_tail = lu_.row(k).subspan(k + 1);
    for (std::size_t r = k + 1; r < n; ++r) {
      const cplx factor = lu_(r, k) / pivot;
      lu_(r, k) = factor;
      if (factor != cplx{}) kernels::caxpy(lu_.row(r).subspan(k + 1), -factor, pivot_tail);
    }
  }
  condition_estimate_ = n == 0 ? 1.0 : max_pivot / min_pivot;
}

std::vector<cplx> LuFactorization::solve(std::span<const cplx> b) const {
  const std::size_t n = lu_.rows();
  if (b.size() != n) throw DimensionMismatch("LuFactorization::solve: rhs length mismatch");
  if (singular_) throw SolveError("LuFactorization::solve: singular matrix", condition_estimate_);
  std::vector<cplx> x(n);
  for (std::size_t r = 0; r < n; ++r) x[r] = b[perm_[r]];
  for (std::size_t r = 1; r < n; ++r)
    x[r] -= kernels::dotu(lu_.row(r).first(r), std::span<const cplx>(x).first(r));
  for (std::size_t r = n; r-- > 0;) {
    const auto tail = lu_.row(r).subspan(r + 1);
    x[r] = (x[r] - kernels::dotu(tail, std::span<const cplx>(x).subspan(r + 1))) / lu_(r, r);
  }
  return x;
}

}  // namespace kahler
