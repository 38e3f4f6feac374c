#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "greyshot/kernels.hpp"

namespace greyshot::kernels {

namespace {

Backend initial_backend() { return detect_backend(); }

std::atomic<Backend>& active() {
  static std::atomic<Backend> backend{initial_backend()};
  return backend;
}

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernel operands differ in length");
}

}  // namespace

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

Backend parse_backend(std::string_view name) {
  if (name == "auto") return detect_backend();
  if (name == "scalar") return Backend::Scalar;
  if (name == "avx2") return Backend::Avx2;
  if (name == "neon") return Backend::Neon;
  throw std::invalid_argument("unknown SIMD backend: " + std::string(name));
}

bool backend_available(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(GREYSHOT_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Backend::Neon:
#if defined(__aarch64__) && defined(__ARM_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend detect_backend() {
  if (const char* env = std::getenv("GREYSHOT_SIMD"); env && *env) {
    std::string_view name(env);
    if (name != "auto") {
      Backend b = parse_backend(name);
      if (backend_available(b)) return b;
    }
  }
  if (backend_available(Backend::Avx2)) return Backend::Avx2;
  if (backend_available(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

Backend active_backend() { return active().load(std::memory_order_relaxed); }

void set_active_backend(Backend b) {
  if (!backend_available(b)) {
    throw std::invalid_argument("SIMD backend not available on this CPU: " +
                                std::string(backend_name(b)));
  }
  active().store(b, std::memory_order_relaxed);
}

double dot(std::span<const double> x, std::span<const double> y) {
  check_sizes(x.size(), y.size());
  switch (active_backend()) {
    case Backend::Avx2: return avx2::dot(x.data(), y.data(), x.size());
    case Backend::Neon: return neon::dot(x.data(), y.data(), x.size());
    case Backend::Scalar: break;
  }
  return scalar::dot(x.data(), y.data(), x.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_sizes(x.size(), y.size());
  switch (active_backend()) {
    case Backend::Avx2: avx2::axpy(alpha, x.data(), y.data(), x.size()); return;
    case Backend::Neon: neon::axpy(alpha, x.data(), y.data(), x.size()); return;
    case Backend::Scalar: break;
  }
  scalar::axpy(alpha, x.data(), y.data(), x.size());
}

void score_rows(std::span<const double> u, std::span<const double> rows,
                std::size_t k, std::span<double> out) {
  check_sizes(u.size(), k);
  check_sizes(rows.size(), k * out.size());
  switch (active_backend()) {
    case Backend::Avx2:
      avx2::score_rows(u.data(), rows.data(), k, out.size(), out.data());
      return;
    case Backend::Neon:
      neon::score_rows(u.data(), rows.data(), k, out.size(), out.data());
      return;
    case Backend::Scalar: break;
  }
  scalar::score_rows(u.data(), rows.data(), k, out.size(), out.data());
}

}  // namespace greyshot::kernels
