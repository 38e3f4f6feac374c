#pragma once
// GM(1,1) grey-system model: accumulated generating operation (AGO),
// least-squares estimation of the development coefficient a and grey input b,
// and the exponential time-response forecast.

#include <cstddef>
#include <span>
#include <vector>

namespace greyshot::grey {

inline constexpr double kDefaultAlpha = 0.5;
inline constexpr std::size_t kMinFitLength = 4;
inline constexpr double kMinAbsA = 1e-12;

struct GM11Model {
  double a = 0.0;         // development coefficient
  double b = 0.0;         // grey input
  double x0_first = 0.0;  // first raw observation
  double alpha = kDefaultAlpha;
};

// Partial sums: out[t] = in[0] + ... + in[t].
std::vector<double> ago(std::span<const double> series);

// First differences with out[0] = in[0]; exact inverse of ago().
std::vector<double> inverse_ago(std::span<const double> series);

// Fits x0(k) = -a * z(k) + b for k = 2..n, with background values
// z(k) = alpha * x1(k-1) + (1 - alpha) * x1(k) over consecutive AGO pairs.
// Requires n >= 4, strictly positive values and alpha in [0, 1]; throws
// std::invalid_argument otherwise and std::domain_error if |a| < 1e-12.
GM11Model fit_gm11(std::span<const double> series, double alpha = kDefaultAlpha);

// Time response (x0_first - b/a) * exp(-a t) + b/a of the accumulated series.
double forecast_cumulative(const GM11Model& model, std::size_t t);

// out[k-1] = forecast_cumulative(k) - forecast_cumulative(k-1), k = 1..horizon.
std::vector<double> forecast_restored(const GM11Model& model, std::size_t horizon);

// Sum of squared residuals of x0(k) + a z(k) - b over k = 2..n for the given
// (a, b); the objective fit_gm11 minimizes.
double residual_sum_of_squares(std::span<const double> series, double alpha,
                               double a, double b);

}  // namespace greyshot::grey
