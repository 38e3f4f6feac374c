#pragma once
// Finite-difference verification of the closed-form per-cell gradients of g^g.

#include <cstddef>
#include <cstdint>

namespace greyshot::gradcheck {

struct Options {
  std::size_t trials = 1000;  // accepted points (those with g >= min_g)
  std::uint64_t seed = 1;
  double step = 1e-6;
  double min_g = 0.05;
  double rel_tol = 1e-4;
  double abs_tol = 1e-8;       // applies where |true value| < small_value
  double small_value = 1e-6;
};

struct GradientStats {
  double max_rel_error = 0.0;    // over entries with |fd| >= small_value
  double max_abs_error_small = 0.0;  // over entries with |fd| < small_value
  std::size_t entries = 0;
  std::size_t failures = 0;
};

struct Report {
  GradientStats a, b, u, v;
  std::size_t points = 0;
  std::size_t rejected_points = 0;  // sampled but g < min_g
  bool passed() const {
    return a.failures == 0 && b.failures == 0 && u.failures == 0 && v.failures == 0;
  }
};

// Samples a in [0.2, 2], b in [-1, 1], K in {1, 4, 16}, factor entries in [0, 1)
// and compares each analytic gradient with a central difference of g^g taken
// in extended precision.
Report run(const Options& options);

}  // namespace greyshot::gradcheck
