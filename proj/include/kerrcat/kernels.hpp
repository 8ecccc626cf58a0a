#pragma once
// Dense complex arithmetic kernels used by the Fock-space code.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The variant is picked once at first use from CPUID and
// can be pinned with force_isa() (tests use this to compare the two paths).
// Complex data is interleaved (std::complex<double> layout).

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace kerrcat::kernels {

using cplx = std::complex<double>;

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);
Isa active_isa();
// Pins the dispatch target; returns the previous one. Throws if unavailable.
Isa force_isa(Isa isa);

// y[i] = sum_j a[i*cols + j] * x[j]
void cmatvec(std::span<const cplx> a, std::size_t rows, std::size_t cols,
             std::span<const cplx> x, std::span<cplx> y);

// y += alpha * x
void caxpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);

// sum_i conj(x[i]) * y[i]
cplx cdotc(std::span<const cplx> x, std::span<const cplx> y);

// sum_i |x[i]|^2
double cnorm2(std::span<const cplx> x);

// density[j] = |sum_n coeffs[n] * h_n(q[j])|^2, h_n the normalised Hermite
// functions (oscillator eigenfunctions in the dimensionless position q).
void hermite_density(std::span<const cplx> coeffs, std::span<const double> q,
                     std::span<double> density);

namespace scalar {
void cmatvec(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y);
void caxpy(cplx alpha, const cplx* x, cplx* y, std::size_t n);
cplx cdotc(const cplx* x, const cplx* y, std::size_t n);
double cnorm2(const cplx* x, std::size_t n);
void hermite_density(const cplx* c, std::size_t nc, const double* q, double* out, std::size_t nq);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define KERRCAT_HAVE_AVX2_KERNELS 1
namespace avx2 {
void cmatvec(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y);
void caxpy(cplx alpha, const cplx* x, cplx* y, std::size_t n);
cplx cdotc(const cplx* x, const cplx* y, std::size_t n);
double cnorm2(const cplx* x, std::size_t n);
void hermite_density(const cplx* c, std::size_t nc, const double* q, double* out, std::size_t nq);
}  // namespace avx2
#else
#define KERRCAT_HAVE_AVX2_KERNELS 0
#endif

}  // namespace kerrcat::kernels
