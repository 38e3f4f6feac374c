#include "greyshot/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "greyshot/kernels.hpp"
#include "greyshot/random.hpp"

namespace greyshot::model {

namespace {

void check_a(double a) {
  if (!(std::abs(a) >= kMinAbsA)) {
    throw std::domain_error("grey coefficient a is within 1e-12 of zero");
  }
}

void check_cell(const GreyShotParams& params, std::size_t i, std::size_t j) {
  if (i >= params.m || j >= params.n) {
    throw std::out_of_range("cell (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") outside " + std::to_string(params.m) + " x " +
                            std::to_string(params.n));
  }
}

double clamp_g(double g, double g_floor) { return std::clamp(g, g_floor, kGCeiling); }

// Throws unless the unclamped transform is positive at x.
void check_positive(double a, double b, double x) {
  const double g = grey_transform(x, a, b);
  if (!(g > 0.0)) throw std::domain_error("grey transform is not positive at this cell");
}

}  // namespace

void TrainConfig::validate() const {
  if (rank == 0) throw std::invalid_argument("rank must be >= 1");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw std::invalid_argument("learning rate must be finite and nonnegative");
  }
  if (iterations == 0) throw std::invalid_argument("iterations must be >= 1");
  if (!(g_floor > 0.0 && g_floor < 1.0)) {
    throw std::invalid_argument("g_floor must lie in (0, 1)");
  }
  if (!(std::abs(init_a) >= kMinAbsA)) throw std::invalid_argument("initial a too close to 0");
  if (!std::isfinite(init_scale) || !std::isfinite(init_b)) {
    throw std::invalid_argument("initialization values must be finite");
  }
}

double TrainConfig::effective_init_scale() const {
  return init_scale > 0.0 ? init_scale : 1.0 / std::sqrt(static_cast<double>(rank));
}

double grey_transform(double x, double a, double b) {
  check_a(a);
  const double ratio = b / a;
  return (1.0 - ratio) * std::exp(-a * x) + ratio;
}

double likelihood_term(double g) {
  if (!(g > 0.0)) throw std::domain_error("likelihood_term: g must be positive");
  return std::exp(g * std::log(g));
}

double log_likelihood(const GreyShotParams& params,
                      std::span<const std::pair<std::size_t, std::size_t>> pairs,
                      double g_floor) {
  check_a(params.a);
  double total = 0.0;
  for (const auto& [i, j] : pairs) {
    check_cell(params, i, j);
    const double x = kernels::dot(params.user(i), params.item(j));
    const double g = clamp_g(grey_transform(x, params.a, params.b), g_floor);
    total += g * std::log(g);
  }
  return total;
}

// When the transform leaves [g_floor, 20] the base is clamped and the
// exponential term is rebased so that t0 + t4 still equals the clamped g.
double grad_a_at(double a, double b, double x, double g_floor) {
  check_a(a);
  const double t0 = b / a;
  const double t1 = x;
  const double t2 = std::exp(-a * t1);
  const double t3 = 1.0 - t0;
  double t4 = t2 * t3;
  double t5 = t0 + t4;
  if (const double gc = clamp_g(t5, g_floor); gc != t5) {
    t5 = gc;
    t4 = gc - t0;
  }
  const double t6 = std::pow(t5, t0 - 1.0 + t4);
  const double t7 = a * a;
  const double t8 = std::pow(t5, t5);
  const double t9 = std::log(t5);
  const double t10 = t2 * t9;
  return b * t2 * t5 * t6 / t7 - t1 * t4 * t5 * t6 - b * t5 * t6 / t7 -
         t1 * t10 * t3 * t8 + b * t10 * t8 / t7 - b * t8 * t9 / t7;
}

double grad_b_at(double a, double b, double x, double g_floor) {
  check_a(a);
  const double t0 = b / a;
  const double t1 = std::exp(-a * x);
  double t2 = t1 * (1.0 - t0);
  double t3 = t0 + t2;
  if (const double gc = clamp_g(t3, g_floor); gc != t3) {
    t3 = gc;
    t2 = gc - t0;
  }
  const double t4 = std::pow(t3, t0 - 1.0 + t2);
  const double t5 = std::pow(t3, t3);
  const double t6 = std::log(t3);
  return t3 * t4 / a - t1 * t3 * t4 / a - t1 * t5 * t6 / a + t5 * t6 / a;
}

double factor_grad_coef(double a, double b, double x, double g_floor) {
  check_a(a);
  const double t0 = b / a;
  const double t1 = std::exp(-a * x);
  const double t2 = 1.0 - t0;
  double t3 = t1 * t2;
  double t4 = t0 + t3;
  if (const double gc = clamp_g(t4, g_floor); gc != t4) {
    t4 = gc;
    t3 = gc - t0;
  }
  return -(a * t3 * std::pow(t4, t0 + t3) + a * t1 * t2 * std::pow(t4, t4) * std::log(t4));
}

double grad_a(const GreyShotParams& params, std::size_t i, std::size_t j, double g_floor) {
  check_cell(params, i, j);
  const double x = kernels::dot(params.user(i), params.item(j));
  check_positive(params.a, params.b, x);
  return grad_a_at(params.a, params.b, x, g_floor);
}

double grad_b(const GreyShotParams& params, std::size_t i, std::size_t j, double g_floor) {
  check_cell(params, i, j);
  const double x = kernels::dot(params.user(i), params.item(j));
  check_positive(params.a, params.b, x);
  return grad_b_at(params.a, params.b, x, g_floor);
}

std::vector<double> grad_u(const GreyShotParams& params, std::size_t i, std::size_t j,
                           double g_floor) {
  check_cell(params, i, j);
  const double x = kernels::dot(params.user(i), params.item(j));
  check_positive(params.a, params.b, x);
  const double coef = factor_grad_coef(params.a, params.b, x, g_floor);
  std::vector<double> out(params.k, 0.0);
  kernels::axpy(coef, params.item(j), out);
  return out;
}

std::vector<double> grad_v(const GreyShotParams& params, std::size_t i, std::size_t j,
                           double g_floor) {
  check_cell(params, i, j);
  const double x = kernels::dot(params.user(i), params.item(j));
  check_positive(params.a, params.b, x);
  const double coef = factor_grad_coef(params.a, params.b, x, g_floor);
  std::vector<double> out(params.k, 0.0);
  kernels::axpy(coef, params.user(i), out);
  return out;
}

GreyShotParams initialize(std::size_t m, std::size_t n, const TrainConfig& config) {
  config.validate();
  if (m == 0 || n == 0) throw std::invalid_argument("user and item counts must be >= 1");
  GreyShotParams params;
  params.m = m;
  params.n = n;
  params.k = config.rank;
  params.a = config.init_a;
  params.b = config.init_b;
  params.u.resize(m * config.rank);
  params.v.resize(n * config.rank);
  Rng rng(config.seed);
  const double scale = config.effective_init_scale();
  for (double& x : params.u) x = scale * rng.uniform();
  for (double& x : params.v) x = scale * rng.uniform();
  return params;
}

TrainResult train(std::size_t m, std::size_t n, const TrainConfig& config) {
  TrainResult result{initialize(m, n, config)};
  GreyShotParams& p = result.params;
  // Sampling draws from a stream distinct from the initializer's.
  Rng rng(mix64(config.seed ^ 0x5A4D504C45ULL));
  const double step = config.direction == Direction::Ascent ? config.learning_rate
                                                            : -config.learning_rate;
  std::vector<double> next_user(p.k);
  std::vector<double> next_item(p.k);

  auto all_finite = [](std::span<const double> xs) {
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
  };

  for (std::uint64_t it = 0; it < config.iterations; ++it) {
    const std::size_t i = rng.below(m);
    const std::size_t j = rng.below(n);
    std::span<double> ui = p.user(i);
    std::span<double> vj = p.item(j);

    const double x = kernels::dot(ui, vj);
    const double g = grey_transform(x, p.a, p.b);
    if (!(g > 0.0) || !std::isfinite(g)) {
      ++result.skipped_steps;
      continue;
    }
    // All four gradients are taken at the step's starting point.
    const double ga = grad_a_at(p.a, p.b, x, config.g_floor);
    const double gb = grad_b_at(p.a, p.b, x, config.g_floor);
    const double coef = factor_grad_coef(p.a, p.b, x, config.g_floor);
    const double new_a = p.a + step * ga;
    const double new_b = p.b + step * gb;
    if (!std::isfinite(ga) || !std::isfinite(gb) || !std::isfinite(coef) ||
        !std::isfinite(new_a) || !std::isfinite(new_b)) {
      ++result.skipped_steps;
      continue;
    }

    std::copy(ui.begin(), ui.end(), next_user.begin());
    std::copy(vj.begin(), vj.end(), next_item.begin());
    kernels::axpy(step * coef, vj, next_user);
    kernels::axpy(step * coef, ui, next_item);
    if (!all_finite(next_user) || !all_finite(next_item)) {
      ++result.skipped_steps;
      continue;
    }
    std::copy(next_user.begin(), next_user.end(), ui.begin());
    std::copy(next_item.begin(), next_item.end(), vj.begin());

    if (std::abs(new_a) >= kMinAbsA) {
      p.a = new_a;
    } else {
      ++result.rejected_a_updates;
    }
    p.b = new_b;
  }
  return result;
}

double predict(const GreyShotParams& params, std::size_t i, std::size_t j) {
  check_cell(params, i, j);
  return kernels::dot(params.user(i), params.item(j));
}

}  // namespace greyshot::model
