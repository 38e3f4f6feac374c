#pragma once
// Dense inner-loop kernels shared by the factor models.
//
// Every backend uses the same reduction order for dot(): four interleaved
// lane accumulators over blocks of four, summed as (l0 + l1) + (l2 + l3),
// then the tail added left to right. No fused multiply-add is used, so the
// scalar, AVX2 and NEON variants agree bit for bit.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

namespace greyshot::kernels {

enum class Backend { Scalar, Avx2, Neon };

std::string_view backend_name(Backend b);

// Parses "scalar", "avx2", "neon" or "auto". Throws std::invalid_argument.
Backend parse_backend(std::string_view name);

// True if the backend was compiled in and the running CPU supports it.
bool backend_available(Backend b);

// Best available backend, unless GREYSHOT_SIMD names another available one.
Backend detect_backend();

// Process-wide backend used by the free functions below.
Backend active_backend();
void set_active_backend(Backend b);

double dot(std::span<const double> x, std::span<const double> y);

// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

// out[j] = dot(u, rows[j*k .. j*k+k)) for every row j of a row-major matrix.
void score_rows(std::span<const double> u, std::span<const double> rows,
                std::size_t k, std::span<double> out);

// Per-backend entry points. Only call the SIMD ones when backend_available().
namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void score_rows(const double* u, const double* rows, std::size_t k,
                std::size_t count, double* out);
}  // namespace scalar

namespace avx2 {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void score_rows(const double* u, const double* rows, std::size_t k,
                std::size_t count, double* out);
}  // namespace avx2

namespace neon {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void score_rows(const double* u, const double* rows, std::size_t k,
                std::size_t count, double* out);
}  // namespace neon

}  // namespace greyshot::kernels
