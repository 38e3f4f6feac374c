// Compiled with -mavx2 (no -mfma) on x86-64; a stub elsewhere.
#include "greyshot/kernels.hpp"

#if defined(GREYSHOT_HAVE_AVX2)
#include <immintrin.h>

namespace greyshot::kernels::avx2 {

namespace {

inline double reduce_lanes(__m256d acc) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

}  // namespace

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d p = _mm256_mul_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k));
    acc = _mm256_add_pd(acc, p);
  }
  double s = reduce_lanes(acc);
  for (; k < n; ++k) s += x[k] * y[k];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d p = _mm256_mul_pd(va, _mm256_loadu_pd(x + k));
    _mm256_storeu_pd(y + k, _mm256_add_pd(_mm256_loadu_pd(y + k), p));
  }
  for (; k < n; ++k) y[k] += alpha * x[k];
}

void score_rows(const double* u, const double* rows, std::size_t k,
                std::size_t count, double* out) {
  // Two rows per pass so the u loads are shared.
  std::size_t j = 0;
  const std::size_t body = k & ~std::size_t{3};
  for (; j + 2 <= count; j += 2) {
    const double* r0 = rows + j * k;
    const double* r1 = r0 + k;
    __m256d a0 = _mm256_setzero_pd();
    __m256d a1 = _mm256_setzero_pd();
    for (std::size_t c = 0; c < body; c += 4) {
      __m256d vu = _mm256_loadu_pd(u + c);
      a0 = _mm256_add_pd(a0, _mm256_mul_pd(vu, _mm256_loadu_pd(r0 + c)));
      a1 = _mm256_add_pd(a1, _mm256_mul_pd(vu, _mm256_loadu_pd(r1 + c)));
    }
    double s0 = reduce_lanes(a0);
    double s1 = reduce_lanes(a1);
    for (std::size_t c = body; c < k; ++c) {
      s0 += u[c] * r0[c];
      s1 += u[c] * r1[c];
    }
    out[j] = s0;
    out[j + 1] = s1;
  }
  for (; j < count; ++j) out[j] = dot(u, rows + j * k, k);
}

}  // namespace greyshot::kernels::avx2

#else

#include <stdexcept>

namespace greyshot::kernels::avx2 {

double dot(const double*, const double*, std::size_t) {
  throw std::logic_error("avx2 kernels not compiled in");
}
void axpy(double, const double*, double*, std::size_t) {
  throw std::logic_error("avx2 kernels not compiled in");
}
void score_rows(const double*, const double*, std::size_t, std::size_t, double*) {
  throw std::logic_error("avx2 kernels not compiled in");
}

}  // namespace greyshot::kernels::avx2

#endif
