#pragma once
// Accuracy (MAE) and popularity-skew (Degree of Matthew Effect) metrics.

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>

#include "greyshot/dataset.hpp"
#include "greyshot/scorer.hpp"

namespace greyshot::metrics {

struct RescalePolicy {
  enum class Mode { None, MinMax };
  Mode mode = Mode::None;
  double target_min = 1.0;
  double target_max = 5.0;

  static RescalePolicy none() { return {}; }
  static RescalePolicy minmax(double lo, double hi) { return {Mode::MinMax, lo, hi}; }
};

// Mean |R_ij - R^_ij| over the test triplets. Under MinMax the batch of
// predictions is mapped affinely onto [target_min, target_max] first.
// Throws std::invalid_argument for an empty batch or constant MinMax input.
double mae(const Scorer& scorer, std::span<const data::Rating> test,
           const RescalePolicy& policy);

// Same, over precomputed predictions aligned with `ratings`.
double mae(std::span<const double> predictions, std::span<const double> ratings,
           const RescalePolicy& policy);

// Affine min-max map of a batch onto [lo, hi].
std::vector<double> rescale_minmax(std::span<const double> values, double lo, double hi);

struct PopularityProfile {
  std::map<std::size_t, std::size_t> counts;  // item -> number of top-L lists containing it

  std::size_t size() const { return counts.size(); }
  std::size_t x_max() const;
  std::size_t total() const;
};

// Counts how often each item appears in the per-user top-L lists. Ties are
// broken by ascending item id.
PopularityProfile popularity_profile(const Scorer& scorer, std::size_t L);

// Thrown when every count in the profile is equal (the log-sum is zero).
class DegenerateProfile : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// DME = 1 + n / sum_i ln(x_i / x_max) over the items in the profile.
double dme(const PopularityProfile& profile);

// Same formula over positive popularity magnitudes.
double dme(std::span<const double> magnitudes);

}  // namespace greyshot::metrics
