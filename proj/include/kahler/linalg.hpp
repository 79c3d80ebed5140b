#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace kahler {

using cplx = std::complex<double>;

/// Row-major dense complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  cplx operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<cplx> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const cplx> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<const cplx> data() const { return data_; }

  ComplexMatrix transpose() const;
  std::vector<cplx> multiply(std::span<const cplx> x) const;
  double max_abs() const;

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// LU factorization with partial (row) pivoting.
///
/// A pivot is treated as zero when its modulus is at most
/// `relative_threshold` times the largest entry of the input matrix.
class LuFactorization {
 public:
  static constexpr double kDefaultThreshold = 1e-12;

  explicit LuFactorization(ComplexMatrix a, double relative_threshold = kDefaultThreshold);

  bool singular() const { return singular_; }
  /// max |pivot| / min |pivot|; +inf when singular.
  double condition_estimate() const { return condition_estimate_; }
  std::size_t size() const { return lu_.rows(); }

  /// Solves A x = b. Requires a nonsingular factorization.
  std::vector<cplx> solve(std::span<const cplx> b) const;

 private:
  ComplexMatrix lu_;
  std::vector<std::size_t> perm_;
  bool singular_ = false;
  double condition_estimate_ = 1.0;
};

}  // namespace kahler
