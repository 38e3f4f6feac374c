#include "greyshot/kernels.hpp"

namespace greyshot::kernels::scalar {

double dot(const double* x, const double* y, std::size_t n) {
  double l0 = 0.0, l1 = 0.0, l2 = 0.0, l3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    l0 += x[k] * y[k];
    l1 += x[k + 1] * y[k + 1];
    l2 += x[k + 2] * y[k + 2];
    l3 += x[k + 3] * y[k + 3];
  }
  double s = (l0 + l1) + (l2 + l3);
  for (; k < n; ++k) s += x[k] * y[k];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += alpha * x[k];
}

void score_rows(const double* u, const double* rows, std::size_t k,
                std::size_t count, double* out) {
  for (std::size_t j = 0; j < count; ++j) out[j] = dot(u, rows + j * k, k);
}

}  // namespace greyshot::kernels::scalar
