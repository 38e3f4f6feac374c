#include "greyshot/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace greyshot::metrics {

std::vector<double> rescale_minmax(std::span<const double> values, double lo, double hi) {
  if (values.empty()) throw std::invalid_argument("rescale_minmax: empty batch");
  if (!(lo < hi)) throw std::invalid_argument("rescale_minmax: target_min must be < target_max");
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  const double vmin = *mn, vmax = *mx;
  if (!(vmax > vmin)) {
    throw std::invalid_argument("rescale_minmax: predictions are constant, map is degenerate");
  }
  std::vector<double> out(values.size());
  const double scale = (hi - lo) / (vmax - vmin);
  for (std::size_t t = 0; t < values.size(); ++t) {
    out[t] = values[t] == vmax ? hi : lo + (values[t] - vmin) * scale;
  }
  return out;
}

double mae(std::span<const double> predictions, std::span<const double> ratings,
           const RescalePolicy& policy) {
  if (predictions.empty()) throw std::invalid_argument("mae: empty test set");
  if (predictions.size() != ratings.size()) {
    throw std::invalid_argument("mae: prediction/rating count mismatch");
  }
  std::vector<double> mapped;
  std::span<const double> pred = predictions;
  if (policy.mode == RescalePolicy::Mode::MinMax) {
    mapped = rescale_minmax(predictions, policy.target_min, policy.target_max);
    pred = mapped;
  }
  double total = 0.0;
  for (std::size_t t = 0; t < pred.size(); ++t) total += std::abs(ratings[t] - pred[t]);
  return total / static_cast<double>(pred.size());
}

double mae(const Scorer& scorer, std::span<const data::Rating> test,
           const RescalePolicy& policy) {
  if (test.empty()) throw std::invalid_argument("mae: empty test set");
  std::vector<double> predictions(test.size()), ratings(test.size());
  for (std::size_t t = 0; t < test.size(); ++t) {
    predictions[t] = scorer.predict(test[t].user, test[t].item);
    ratings[t] = test[t].value;
  }
  return mae(predictions, ratings, policy);
}

std::size_t PopularityProfile::x_max() const {
  std::size_t best = 0;
  for (const auto& [item, count] : counts) best = std::max(best, count);
  return best;
}

std::size_t PopularityProfile::total() const {
  std::size_t sum = 0;
  for (const auto& [item, count] : counts) sum += count;
  return sum;
}

PopularityProfile popularity_profile(const Scorer& scorer, std::size_t L) {
  const std::size_t n = scorer.items();
  if (L == 0 || L > n) throw std::invalid_argument("popularity_profile: need 1 <= L <= n");
  std::vector<std::size_t> tally(n, 0);
  std::vector<double> scores(n);
  std::vector<std::size_t> order(n);
  // Larger score first; equal scores by ascending item id.
  auto better = [&scores](std::size_t x, std::size_t y) {
    return scores[x] > scores[y] || (scores[x] == scores[y] && x < y);
  };
  for (std::size_t i = 0; i < scorer.users(); ++i) {
    scorer.score_user(i, scores);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(L),
                      order.end(), better);
    for (std::size_t r = 0; r < L; ++r) ++tally[order[r]];
  }
  PopularityProfile profile;
  for (std::size_t j = 0; j < n; ++j) {
    if (tally[j] > 0) profile.counts.emplace(j, tally[j]);
  }
  return profile;
}

double dme(std::span<const double> magnitudes) {
  if (magnitudes.empty()) throw std::invalid_argument("dme: empty profile");
  double x_max = 0.0;
  for (double x : magnitudes) {
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("dme: magnitudes must be positive");
    x_max = std::max(x_max, x);
  }
  double log_sum = 0.0;
  for (double x : magnitudes) log_sum += std::log(x / x_max);
  if (log_sum == 0.0) {
    throw DegenerateProfile("dme: all counts equal, degree of Matthew effect undefined");
  }
  return 1.0 + static_cast<double>(magnitudes.size()) / log_sum;
}

double dme(const PopularityProfile& profile) {
  std::vector<double> magnitudes;
  magnitudes.reserve(profile.size());
  for (const auto& [item, count] : profile.counts) magnitudes.push_back(static_cast<double>(count));
  return dme(magnitudes);
}

}  // namespace greyshot::metrics
