// Compiled with -mavx2 only; the dispatcher never calls into this unit on CPUs
// without AVX2.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "kahler/errors.hpp"
#include "kahler/kernels.hpp"

namespace kahler::kernels::avx2 {

namespace {

inline const double* as_doubles(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }

// Horizontal add of [r0 i0 r1 i1] into (r0 + r1, i0 + i1).
inline cplx reduce_pair(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return {_mm_cvtsd_f64(s), _mm_cvtsd_f64(_mm_unpackhi_pd(s, s))};
}

}  // namespace

void caxpy(std::span<cplx> y, cplx a, std::span<const cplx> x) {
  if (y.size() != x.size()) throw DimensionMismatch("caxpy: length mismatch");
  const std::size_t n = y.size();
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  double* yd = as_doubles(y.data());
  const double* xd = as_doubles(x.data());
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * k);
    const __m256d xs = _mm256_permute_pd(xv, 0b0101);  // [xi xr xi xr]
    const __m256d t = _mm256_mul_pd(ar, xv);            // [ar*xr ar*xi ...]
    const __m256d u = _mm256_mul_pd(ai, xs);            // [ai*xi ai*xr ...]
    const __m256d p = _mm256_addsub_pd(t, u);           // [ar*xr-ai*xi ar*xi+ai*xr ...]
    _mm256_storeu_pd(yd + 2 * k, _mm256_add_pd(_mm256_loadu_pd(yd + 2 * k), p));
  }
  for (; k < n; ++k) {
    const double xr = x[k].real();
    const double xi = x[k].imag();
    const double pr = a.real() * xr - a.imag() * xi;
    const double pi = a.real() * xi + a.imag() * xr;
    y[k] = cplx{y[k].real() + pr, y[k].imag() + pi};
  }
}

cplx dotu(std::span<const cplx> x, std::span<const cplx> y) {
  if (y.size() != x.size()) throw DimensionMismatch("dotu: length mismatch");
  const std::size_t n = x.size();
  const double* xd = as_doubles(x.data());
  const double* yd = as_doubles(y.data());
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * k);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * k);
    const __m256d xr = _mm256_movedup_pd(xv);           // [xr xr ...]
    const __m256d xi = _mm256_permute_pd(xv, 0b1111);   // [xi xi ...]
    const __m256d ys = _mm256_permute_pd(yv, 0b0101);   // [yi yr ...]
    const __m256d p = _mm256_addsub_pd(_mm256_mul_pd(xr, yv), _mm256_mul_pd(xi, ys));
    acc = _mm256_add_pd(acc, p);
  }
  cplx s = reduce_pair(acc);
  double sr = s.real();
  double si = s.imag();
  for (; k < n; ++k) {
    sr += x[k].real() * y[k].real() - x[k].imag() * y[k].imag();
    si += x[k].real() * y[k].imag() + x[k].imag() * y[k].real();
  }
  return {sr, si};
}

cplx dotc(std::span<const cplx> x, std::span<const cplx> y) {
  if (y.size() != x.size()) throw DimensionMismatch("dotc: length mismatch");
  const std::size_t n = x.size();
  const double* xd = as_doubles(x.data());
  const double* yd = as_doubles(y.data());
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * k);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * k);
    const __m256d xr = _mm256_movedup_pd(xv);
    const __m256d xi = _mm256_permute_pd(xv, 0b1111);
    const __m256d ys = _mm256_permute_pd(yv, 0b0101);   // [yi yr ...]
    // conj(x) * y = (xr*yr + xi*yi, xr*yi - xi*yr)
    const __m256d t = _mm256_mul_pd(xr, yv);            // [xr*yr xr*yi]
    const __m256d u = _mm256_mul_pd(xi, ys);            // [xi*yi xi*yr]
    const __m256d sign = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
    acc = _mm256_add_pd(acc, _mm256_add_pd(t, _mm256_xor_pd(u, sign)));
  }
  cplx s = reduce_pair(acc);
  double sr = s.real();
  double si = s.imag();
  for (; k < n; ++k) {
    sr += x[k].real() * y[k].real() + x[k].imag() * y[k].imag();
    si += x[k].real() * y[k].imag() - x[k].imag() * y[k].real();
  }
  return {sr, si};
}

double max_abs(std::span<const cplx> x) {
  const std::size_t n = x.size();
  const double* xd = as_doubles(x.data());
  __m256d best = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d v = _mm256_loadu_pd(xd + 2 * k);
    const __m256d sq = _mm256_mul_pd(v, v);
    const __m256d sum = _mm256_hadd_pd(sq, sq);  // [r0²+i0² . r1²+i1² .]
    best = _mm256_max_pd(best, _mm256_sqrt_pd(sum));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, best);
  double result = std::max(lanes[0], lanes[2]);
  for (; k < n; ++k) result = std::max(result, std::sqrt(x[k].real() * x[k].real() + x[k].imag() * x[k].imag()));
  return result;
}

}  // namespace kahler::kernels::avx2
