#include "greyshot/grey.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace greyshot::grey {

namespace {

void check_model(const GM11Model& model) {
  if (!(std::abs(model.a) >= kMinAbsA)) {
    throw std::invalid_argument("GM(1,1) model has |a| below 1e-12");
  }
  if (!(model.alpha >= 0.0 && model.alpha <= 1.0)) {
    throw std::invalid_argument("GM(1,1) background weight alpha outside [0, 1]");
  }
}

// Background values z(k), k = 1..n-1 (0-based), from the AGO series.
std::vector<double> background(std::span<const double> accumulated, double alpha) {
  std::vector<double> z(accumulated.size() - 1);
  for (std::size_t k = 1; k < accumulated.size(); ++k) {
    z[k - 1] = alpha * accumulated[k - 1] + (1.0 - alpha) * accumulated[k];
  }
  return z;
}

}  // namespace

std::vector<double> ago(std::span<const double> series) {
  if (series.empty()) throw std::invalid_argument("ago: empty series");
  std::vector<double> out(series.size());
  double running = 0.0;
  for (std::size_t t = 0; t < series.size(); ++t) {
    running += series[t];
    out[t] = running;
  }
  return out;
}

std::vector<double> inverse_ago(std::span<const double> series) {
  if (series.empty()) throw std::invalid_argument("inverse_ago: empty series");
  std::vector<double> out(series.size());
  out[0] = series[0];
  for (std::size_t t = 1; t < series.size(); ++t) out[t] = series[t] - series[t - 1];
  return out;
}

GM11Model fit_gm11(std::span<const double> series, double alpha) {
  if (series.size() < kMinFitLength) {
    throw std::invalid_argument("fit_gm11: need at least " +
                                std::to_string(kMinFitLength) + " observations, got " +
                                std::to_string(series.size()));
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("fit_gm11: alpha must lie in [0, 1]");
  }
  for (std::size_t t = 0; t < series.size(); ++t) {
    if (!(series[t] > 0.0) || !std::isfinite(series[t])) {
      throw std::invalid_argument("fit_gm11: observation " + std::to_string(t) +
                                  " is not strictly positive");
    }
  }

  const std::vector<double> accumulated = ago(series);
  const std::vector<double> z = background(accumulated, alpha);

  // Normal equations for the design matrix [-z, 1] against y = x0(2..n).
  const double count = static_cast<double>(z.size());
  double sum_z = 0.0, sum_zz = 0.0, sum_y = 0.0, sum_zy = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    const double y = series[k + 1];
    sum_z += z[k];
    sum_zz += z[k] * z[k];
    sum_y += y;
    sum_zy += z[k] * y;
  }
  const double det = count * sum_zz - sum_z * sum_z;
  if (!(std::abs(det) > 0.0)) {
    throw std::domain_error("fit_gm11: singular normal equations");
  }
  const double a = (sum_z * sum_y - count * sum_zy) / det;
  const double b = (sum_zz * sum_y - sum_z * sum_zy) / det;
  // The constant-series case leaves a at rounding-noise level rather than 0.
  const double scale = std::abs(sum_y) / count;
  if (!(std::abs(a) >= kMinAbsA) || std::abs(a) * (sum_z / count) < 1e-12 * scale) {
    throw std::domain_error("fit_gm11: near-singular fit, |a| ~ 0 (no exponential trend)");
  }
  return GM11Model{a, b, series[0], alpha};
}

double forecast_cumulative(const GM11Model& model, std::size_t t) {
  check_model(model);
  if (t == 0) return model.x0_first;
  const double ratio = model.b / model.a;
  return (model.x0_first - ratio) * std::exp(-model.a * static_cast<double>(t)) + ratio;
}

std::vector<double> forecast_restored(const GM11Model& model, std::size_t horizon) {
  check_model(model);
  if (horizon == 0) throw std::invalid_argument("forecast_restored: horizon must be >= 1");
  std::vector<double> out(horizon);
  double previous = forecast_cumulative(model, 0);
  for (std::size_t k = 1; k <= horizon; ++k) {
    const double current = forecast_cumulative(model, k);
    out[k - 1] = current - previous;
    previous = current;
  }
  return out;
}

double residual_sum_of_squares(std::span<const double> series, double alpha,
                               double a, double b) {
  const std::vector<double> accumulated = ago(series);
  const std::vector<double> z = background(accumulated, alpha);
  double rss = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    const double r = series[k + 1] + a * z[k] - b;
    rss += r * r;
  }
  return rss;
}

}  // namespace greyshot::grey
