// AArch64 NEON variant; a stub on other targets.
#include "greyshot/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>

namespace greyshot::kernels::neon {

double dot(const double* x, const double* y, std::size_t n) {
  // lo holds lanes {0,1}, hi holds lanes {2,3} of the canonical order.
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(x + k), vld1q_f64(y + k)));
    hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(x + k + 2), vld1q_f64(y + k + 2)));
  }
  double s = (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1)) +
             (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
  for (; k < n; ++k) s += x[k] * y[k];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    vst1q_f64(y + k, vaddq_f64(vld1q_f64(y + k), vmulq_f64(va, vld1q_f64(x + k))));
  }
  for (; k < n; ++k) y[k] += alpha * x[k];
}

void score_rows(const double* u, const double* rows, std::size_t k,
                std::size_t count, double* out) {
  for (std::size_t j = 0; j < count; ++j) out[j] = dot(u, rows + j * k, k);
}

}  // namespace greyshot::kernels::neon

#else

#include <stdexcept>

namespace greyshot::kernels::neon {

double dot(const double*, const double*, std::size_t) {
  throw std::logic_error("neon kernels not compiled in");
}
void axpy(double, const double*, double*, std::size_t) {
  throw std::logic_error("neon kernels not compiled in");
}
void score_rows(const double*, const double*, std::size_t, std::size_t, double*) {
  throw std::logic_error("neon kernels not compiled in");
}

}  // namespace greyshot::kernels::neon

#endif
