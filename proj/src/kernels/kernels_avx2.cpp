// Compiled with -mavx2 -mfma; only reached through the dispatcher after a
// CPUID check.
#include <immintrin.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "kerrcat/kernels.hpp"

namespace kerrcat::kernels::avx2 {
namespace {

inline const double* dp(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* dp(cplx* p) { return reinterpret_cast<double*>(p); }

// [a0+a1] as a complex, lanes (re0, im0, re1, im1)
inline cplx hsum_pair(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return {_mm_cvtsd_f64(s), _mm_cvtsd_f64(_mm_unpackhi_pd(s, s))};
}

inline cplx dot_nc(const cplx* a, const cplx* x, std::size_t n) {
  __m256d acc_r = _mm256_setzero_pd();
  __m256d acc_i = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const __m256d va = _mm256_loadu_pd(dp(a + j));
    const __m256d vx = _mm256_loadu_pd(dp(x + j));
    const __m256d ar = _mm256_movedup_pd(va);
    const __m256d ai = _mm256_permute_pd(va, 0xF);
    const __m256d xs = _mm256_permute_pd(vx, 0x5);
    acc_r = _mm256_fmadd_pd(ar, vx, acc_r);
    acc_i = _mm256_fmadd_pd(ai, xs, acc_i);
  }
  cplx s = hsum_pair(_mm256_addsub_pd(acc_r, acc_i));
  for (; j < n; ++j) s += a[j] * x[j];
  return s;
}

}  // namespace

void cmatvec(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < rows; ++i) y[i] = dot_nc(a + i * cols, x, cols);
}

void caxpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(dp(x + i));
    const __m256d vy = _mm256_loadu_pd(dp(y + i));
    const __m256d xs = _mm256_permute_pd(vx, 0x5);
    const __m256d prod = _mm256_fmaddsub_pd(ar, vx, _mm256_mul_pd(ai, xs));
    _mm256_storeu_pd(dp(y + i), _mm256_add_pd(vy, prod));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

cplx cdotc(const cplx* x, const cplx* y, std::size_t n) {
  __m256d acc_r = _mm256_setzero_pd();
  __m256d acc_i = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(dp(x + i));
    const __m256d vy = _mm256_loadu_pd(dp(y + i));
    acc_r = _mm256_fmadd_pd(_mm256_movedup_pd(vx), vy, acc_r);
    acc_i = _mm256_fmadd_pd(_mm256_permute_pd(vx, 0xF), _mm256_permute_pd(vy, 0x5), acc_i);
  }
  // even lanes: xr*yr + xi*yi, odd lanes: xr*yi - xi*yr
  const __m256d neg = _mm256_sub_pd(_mm256_setzero_pd(), acc_i);
  cplx s = hsum_pair(_mm256_addsub_pd(acc_r, neg));
  for (; i < n; ++i) s += std::conj(x[i]) * y[i];
  return s;
}

double cnorm2(const cplx* x, std::size_t n) {
  const double* d = dp(x);
  const std::size_t m = 2 * n;
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const __m256d v = _mm256_loadu_pd(d + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < m; ++i) s += d[i] * d[i];
  return s;
}

void hermite_density(const cplx* c, std::size_t nc, const double* q, double* out, std::size_t nq) {
  const double h0 = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
  std::vector<double> up(nc), down(nc);
  for (std::size_t n = 0; n < nc; ++n) {
    up[n] = std::sqrt(2.0 / double(n + 1));
    down[n] = std::sqrt(double(n) / double(n + 1));
  }
  std::size_t j = 0;
  for (; j + 4 <= nq; j += 4) {
    alignas(32) double seed[4];
    for (int k = 0; k < 4; ++k) seed[k] = h0 * std::exp(-0.5 * q[j + k] * q[j + k]);
    const __m256d vq = _mm256_loadu_pd(q + j);
    __m256d prev = _mm256_setzero_pd();
    __m256d cur = _mm256_load_pd(seed);
    __m256d wr = _mm256_setzero_pd();
    __m256d wi = _mm256_setzero_pd();
    for (std::size_t n = 0; n < nc; ++n) {
      wr = _mm256_fmadd_pd(_mm256_set1_pd(c[n].real()), cur, wr);
      wi = _mm256_fmadd_pd(_mm256_set1_pd(c[n].imag()), cur, wi);
      const __m256d next = _mm256_fnmadd_pd(
          _mm256_set1_pd(down[n]), prev, _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(up[n]), vq), cur));
      prev = cur;
      cur = next;
    }
    _mm256_storeu_pd(out + j, _mm256_fmadd_pd(wr, wr, _mm256_mul_pd(wi, wi)));
  }
  if (j < nq) kerrcat::kernels::scalar::hermite_density(c, nc, q + j, out + j, nq - j);
}

}  // namespace kerrcat::kernels::avx2
