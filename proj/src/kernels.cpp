#include "kahler/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>

#include "kahler/errors.hpp"

namespace kahler::kernels {

namespace scalar {

void caxpy(std::span<cplx> y, cplx a, std::span<const cplx> x) {
  if (y.size() != x.size()) throw DimensionMismatch("caxpy: length mismatch");
  const double ar = a.real();
  const double ai = a.imag();
  for (std::size_t k = 0; k < y.size(); ++k) {
    const double xr = x[k].real();
    const double xi = x[k].imag();
    const double pr = ar * xr - ai * xi;
    const double pi = ar * xi + ai * xr;
    y[k] = cplx{y[k].real() + pr, y[k].imag() + pi};
  }
}

cplx dotu(std::span<const cplx> x, std::span<const cplx> y) {
  if (y.size() != x.size()) throw DimensionMismatch("dotu: length mismatch");
  double sr = 0.0;
  double si = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sr += x[k].real() * y[k].real() - x[k].imag() * y[k].imag();
    si += x[k].real() * y[k].imag() + x[k].imag() * y[k].real();
  }
  return {sr, si};
}

cplx dotc(std::span<const cplx> x, std::span<const cplx> y) {
  if (y.size() != x.size()) throw DimensionMismatch("dotc: length mismatch");
  double sr = 0.0;
  double si = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sr += x[k].real() * y[k].real() + x[k].imag() * y[k].imag();
    si += x[k].real() * y[k].imag() - x[k].imag() * y[k].real();
  }
  return {sr, si};
}

double max_abs(std::span<const cplx> x) {
  double best = 0.0;
  for (const cplx& v : x) best = std::max(best, std::sqrt(v.real() * v.real() + v.imag() * v.imag()));
  return best;
}

}  // namespace scalar

namespace {

bool cpu_has_avx2() {
#if defined(KAHLER_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend detect() {
  if (const char* env = std::getenv("KAHLER_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::Scalar;
    if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return Backend::Avx2;
  }
  return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& backend_slot() {
  static std::atomic<Backend> slot{detect()};
  return slot;
}

}  // namespace

Backend active_backend() { return backend_slot().load(std::memory_order_relaxed); }

bool backend_available(Backend b) { return b == Backend::Scalar || cpu_has_avx2(); }

void set_backend(Backend b) {
  if (!backend_available(b)) throw InvalidArgument("kernel backend unavailable: " + std::string(backend_name(b)));
  backend_slot().store(b, std::memory_order_relaxed);
}

std::string_view backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

#if defined(KAHLER_HAVE_AVX2)
#define KAHLER_DISPATCH(fn, ...) \
  (active_backend() == Backend::Avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define KAHLER_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

void caxpy(std::span<cplx> y, cplx a, std::span<const cplx> x) { KAHLER_DISPATCH(caxpy, y, a, x); }
cplx dotu(std::span<const cplx> x, std::span<const cplx> y) { return KAHLER_DISPATCH(dotu, x, y); }
cplx dotc(std::span<const cplx> x, std::span<const cplx> y) { return KAHLER_DISPATCH(dotc, x, y); }
double max_abs(std::span<const cplx> x) { return KAHLER_DISPATCH(max_abs, x); }

#undef KAHLER_DISPATCH

}  // namespace kahler::kernels
