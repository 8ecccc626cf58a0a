#include <cmath>
#include <numbers>
#include <vector>

#include "kerrcat/kernels.hpp"

namespace kerrcat::kernels::scalar {

void cmatvec(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < rows; ++i) {
    double re = 0.0, im = 0.0;
    const cplx* row = a + i * cols;
    for (std::size_t j = 0; j < cols; ++j) {
      re += row[j].real() * x[j].real() - row[j].imag() * x[j].imag();
      im += row[j].real() * x[j].imag() + row[j].imag() * x[j].real();
    }
    y[i] = {re, im};
  }
}

void caxpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = {y[i].real() + alpha.real() * x[i].real() - alpha.imag() * x[i].imag(),
            y[i].imag() + alpha.real() * x[i].imag() + alpha.imag() * x[i].real()};
  }
}

cplx cdotc(const cplx* x, const cplx* y, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

double cnorm2(const cplx* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

void hermite_density(const cplx* c, std::size_t nc, const double* q, double* out, std::size_t nq) {
  const double h0 = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
  for (std::size_t j = 0; j < nq; ++j) {
    const double qj = q[j];
    double prev = 0.0;
    double cur = h0 * std::exp(-0.5 * qj * qj);
    double wr = 0.0, wi = 0.0;
    for (std::size_t n = 0; n < nc; ++n) {
      wr += c[n].real() * cur;
      wi += c[n].imag() * cur;
      // h_{n+1} = sqrt(2/(n+1)) q h_n - sqrt(n/(n+1)) h_{n-1}
      const double next = std::sqrt(2.0 / double(n + 1)) * qj * cur -
                          std::sqrt(double(n) / double(n + 1)) * prev;
      prev = cur;
      cur = next;
    }
    out[j] = wr * wr + wi * wi;
  }
}

}  // namespace kerrcat::kernels::scalar
