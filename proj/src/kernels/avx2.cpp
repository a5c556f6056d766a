#include <immintrin.h>

#include "hyb/kernels.hpp"

namespace hyb::kernels::avx2 {

void matmul(const double* a, const double* b, double* c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double* row = c + i * n;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t k = 0; k < n; ++k) {
        const __m256d aik = _mm256_set1_pd(a[i * n + k]);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(aik, _mm256_loadu_pd(b + k * n + j)));
      }
      _mm256_storeu_pd(row + j, acc);
    }
    for (; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += a[i * n + k] * b[k * n + j];
      row[j] = acc;
    }
  }
}

void matvec(const double* a, const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < n; ++k) {
      const __m256d col = _mm256_set_pd(a[(i + 3) * n + k], a[(i + 2) * n + k], a[(i + 1) * n + k], a[i * n + k]);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(col, _mm256_set1_pd(x[k])));
    }
    _mm256_storeu_pd(y + i, acc);
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += a[i * n + k] * x[k];
    y[i] = acc;
  }
}

void axpy(double alpha, const double* x, double* y, std::size_t len) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_mul_pd(va, _mm256_loadu_pd(x + i))));
  }
  for (; i < len; ++i) y[i] += alpha * x[i];
}

}  // namespace hyb::kernels::avx2
