#include <atomic>
#include <stdexcept>
#include <string>

#include "kerrcat/kernels.hpp"

namespace kerrcat::kernels {
namespace {

Isa detect() {
#if KERRCAT_HAVE_AVX2_KERNELS
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::kAvx2;
#endif
  return Isa::kScalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

void check_sizes(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": size mismatch");
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) { return isa == Isa::kScalar || detect() == Isa::kAvx2; }

Isa active_isa() { return current().load(std::memory_order_relaxed); }

Isa force_isa(Isa isa) {
  if (!isa_available(isa)) throw std::runtime_error("kernel ISA not available: " + std::string(isa_name(isa)));
  return current().exchange(isa);
}

void cmatvec(std::span<const cplx> a, std::size_t rows, std::size_t cols, std::span<const cplx> x,
             std::span<cplx> y) {
  check_sizes(a.size(), rows * cols, "cmatvec");
  check_sizes(x.size(), cols, "cmatvec");
  check_sizes(y.size(), rows, "cmatvec");
#if KERRCAT_HAVE_AVX2_KERNELS
  if (active_isa() == Isa::kAvx2) return avx2::cmatvec(a.data(), rows, cols, x.data(), y.data());
#endif
  scalar::cmatvec(a.data(), rows, cols, x.data(), y.data());
}

void caxpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  check_sizes(x.size(), y.size(), "caxpy");
#if KERRCAT_HAVE_AVX2_KERNELS
  if (active_isa() == Isa::kAvx2) return avx2::caxpy(alpha, x.data(), y.data(), x.size());
#endif
  scalar::caxpy(alpha, x.data(), y.data(), x.size());
}

cplx cdotc(std::span<const cplx> x, std::span<const cplx> y) {
  check_sizes(x.size(), y.size(), "cdotc");
#if KERRCAT_HAVE_AVX2_KERNELS
  if (active_isa() == Isa::kAvx2) return avx2::cdotc(x.data(), y.data(), x.size());
#endif
  return scalar::cdotc(x.data(), y.data(), x.size());
}

double cnorm2(std::span<const cplx> x) {
#if KERRCAT_HAVE_AVX2_KERNELS
  if (active_isa() == Isa::kAvx2) return avx2::cnorm2(x.data(), x.size());
#endif
  return scalar::cnorm2(x.data(), x.size());
}

void hermite_density(std::span<const cplx> coeffs, std::span<const double> q, std::span<double> density) {
  check_sizes(q.size(), density.size(), "hermite_density");
#if KERRCAT_HAVE_AVX2_KERNELS
  if (active_isa() == Isa::kAvx2)
    return avx2::hermite_density(coeffs.data(), coeffs.size(), q.data(), density.data(), q.size());
#endif
  scalar::hermite_density(coeffs.data(), coeffs.size(), q.data(), density.data(), q.size());
}

}  // namespace kerrcat::kernels
