#pragma once

// Dense complex inner-loop kernels. Each has a scalar reference and, on x86-64,
// an AVX2 variant; the active backend is chosen once at startup from CPUID and
// can be overridden with KAHLER_KERNELS=scalar|avx2 or set_backend().
//
// caxpy is bit-identical across backends (same operation order, no FMA).
// The reductions (dotu, dotc, max_abs) sum in a different order under AVX2
// and agree with the scalar reference to rounding only.

#include <complex>
#include <span>
#include <string_view>

namespace kahler::kernels {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2 };

/// y += a * x
void caxpy(std::span<cplx> y, cplx a, std::span<const cplx> x);
/// sum_i x_i * y_i (bilinear, no conjugation)
cplx dotu(std::span<const cplx> x, std::span<const cplx> y);
/// sum_i conj(x_i) * y_i
cplx dotc(std::span<const cplx> x, std::span<const cplx> y);
/// max_i |x_i|
double max_abs(std::span<const cplx> x);

Backend active_backend();
/// False when the CPU or the build lacks the backend.
bool backend_available(Backend b);
/// Throws InvalidArgument when the backend is unavailable.
void set_backend(Backend b);
std::string_view backend_name(Backend b);

namespace scalar {
void caxpy(std::span<cplx> y, cplx a, std::span<const cplx> x);
cplx dotu(std::span<const cplx> x, std::span<const cplx> y);
cplx dotc(std::span<const cplx> x, std::span<const cplx> y);
double max_abs(std::span<const cplx> x);
}  // namespace scalar

#if defined(KAHLER_HAVE_AVX2)
namespace avx2 {
void caxpy(std::span<cplx> y, cplx a, std::span<const cplx> x);
cplx dotu(std::span<const cplx> x, std::span<const cplx> y);
cplx dotc(std::span<const cplx> x, std::span<const cplx> y);
double max_abs(std::span<const cplx> x);
}  // namespace avx2
#endif

}  // namespace kahler::kernels
