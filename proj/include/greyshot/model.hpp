#pragma once
// GreyShot: matrix factorization trained by stochastic gradient steps on the
// grey power-law likelihood prod g^g, where g = (1 - b/a) exp(-a U_i.V_j) + b/a.
// Training samples (i, j) uniformly from the index grid and never reads
// ratings; predictions are the raw dot products U_i.V_j.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace greyshot::model {

inline constexpr double kMinAbsA = 1e-12;
inline constexpr double kGCeiling = 20.0;

struct GreyShotParams {
  std::size_t m = 0;  // users
  std::size_t n = 0;  // items
  std::size_t k = 0;  // latent rank
  std::vector<double> u;  // m x k, row-major
  std::vector<double> v;  // n x k, row-major
  double a = 0.5;
  double b = 0.1;

  std::span<const double> user(std::size_t i) const { return {u.data() + i * k, k}; }
  std::span<const double> item(std::size_t j) const { return {v.data() + j * k, k}; }
  std::span<double> user(std::size_t i) { return {u.data() + i * k, k}; }
  std::span<double> item(std::size_t j) { return {v.data() + j * k, k}; }

  bool operator==(const GreyShotParams&) const = default;
};

enum class Direction { Ascent, Descent };

struct TrainConfig {
  std::size_t rank = 10;
  double learning_rate = 0.01;
  std::uint64_t iterations = 100000;
  std::uint64_t seed = 42;
  double init_scale = 0.0;  // <= 0 selects 1/sqrt(rank)
  double g_floor = 1e-8;
  double init_a = 0.5;
  double init_b = 0.1;
  Direction direction = Direction::Descent;

  // Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
  double effective_init_scale() const;
};

struct TrainResult {
  GreyShotParams params;
  std::uint64_t skipped_steps = 0;     // steps discarded for g <= 0 or non-finite values
  std::uint64_t rejected_a_updates = 0;  // a-updates that would land within 1e-12 of 0
};

// g(x) = (1 - b/a) e^{-a x} + b/a. Throws std::domain_error if |a| < 1e-12.
double grey_transform(double x, double a, double b);

// g^g evaluated as exp(g ln g). Throws std::domain_error if g <= 0.
double likelihood_term(double g);

// Sum over pairs of g ln g with g clamped to [g_floor, 20]; the log of the
// likelihood product restricted to the given cells.
double log_likelihood(const GreyShotParams& params,
                      std::span<const std::pair<std::size_t, std::size_t>> pairs,
                      double g_floor = 1e-8);

// Per-cell derivatives of g^g, written with the intermediate quantities of the
// closed-form derivation. Each throws std::out_of_range for bad indices and
// std::domain_error if g <= 0 at the cell.
double grad_a(const GreyShotParams& params, std::size_t i, std::size_t j,
              double g_floor = 1e-8);
double grad_b(const GreyShotParams& params, std::size_t i, std::size_t j,
              double g_floor = 1e-8);
std::vector<double> grad_u(const GreyShotParams& params, std::size_t i, std::size_t j,
                           double g_floor = 1e-8);
std::vector<double> grad_v(const GreyShotParams& params, std::size_t i, std::size_t j,
                           double g_floor = 1e-8);

// Scalar forms in terms of the dot product x = U_i.V_j. The factor-gradient
// coefficient c satisfies d(g^g)/dU_i = c V_j and d(g^g)/dV_j = c U_i.
double grad_a_at(double a, double b, double x, double g_floor = 1e-8);
double grad_b_at(double a, double b, double x, double g_floor = 1e-8);
double factor_grad_coef(double a, double b, double x, double g_floor = 1e-8);

// Initial parameters drawn from the configured seed.
GreyShotParams initialize(std::size_t m, std::size_t n, const TrainConfig& config);

// Runs config.iterations sampled gradient steps. Takes no rating data.
TrainResult train(std::size_t m, std::size_t n, const TrainConfig& config);

double predict(const GreyShotParams& params, std::size_t i, std::size_t j);

}  // namespace greyshot::model
