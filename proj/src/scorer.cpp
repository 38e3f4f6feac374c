#include "greyshot/scorer.hpp"

#include <cmath>
#include <stdexcept>

#include "greyshot/kernels.hpp"
#include "greyshot/random.hpp"

namespace greyshot {

namespace {

void check_cell(std::size_t i, std::size_t j, std::size_t m, std::size_t n) {
  if (i >= m || j >= n) {
    throw std::out_of_range("cell (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") outside " + std::to_string(m) + " x " + std::to_string(n));
  }
}

}  // namespace

void Scorer::score_user(std::size_t i, std::span<double> out) const {
  if (out.size() != items()) throw std::invalid_argument("score_user: output size mismatch");
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = predict(i, j);
}

DotScorer::DotScorer(std::string name, std::size_t m, std::size_t n, std::size_t k,
                     std::vector<double> u, std::vector<double> v)
    : name_(std::move(name)), m_(m), n_(n), k_(k), u_(std::move(u)), v_(std::move(v)) {
  if (u_.size() != m_ * k_ || v_.size() != n_ * k_) {
    throw std::invalid_argument("DotScorer: factor matrix shape mismatch");
  }
}

double DotScorer::predict(std::size_t i, std::size_t j) const {
  check_cell(i, j, m_, n_);
  return kernels::dot({u_.data() + i * k_, k_}, {v_.data() + j * k_, k_});
}

void DotScorer::score_user(std::size_t i, std::span<double> out) const {
  check_cell(i, 0, m_, n_);
  if (out.size() != n_) throw std::invalid_argument("score_user: output size mismatch");
  kernels::score_rows({u_.data() + i * k_, k_}, v_, k_, out);
}

RandomScorer::RandomScorer(std::size_t m, std::size_t n, double rating_min,
                           double rating_max, std::uint64_t seed)
    : m_(m), n_(n), lo_(rating_min), hi_(rating_max), seed_(seed) {
  if (!(rating_min < rating_max)) {
    throw std::invalid_argument("random scorer: rating_min must be < rating_max");
  }
}

double RandomScorer::predict(std::size_t i, std::size_t j) const {
  check_cell(i, j, m_, n_);
  const std::uint64_t h =
      mix64(mix64(mix64(seed_) ^ static_cast<std::uint64_t>(i)) ^ static_cast<std::uint64_t>(j));
  return lo_ + (hi_ - lo_) * bits_to_unit(h);
}

std::unique_ptr<Scorer> random_scorer(std::size_t m, std::size_t n, double rating_min,
                                      double rating_max, std::uint64_t seed) {
  return std::make_unique<RandomScorer>(m, n, rating_min, rating_max, seed);
}

std::unique_ptr<Scorer> greyshot_scorer(model::GreyShotParams params) {
  return std::make_unique<DotScorer>("greyshot", params.m, params.n, params.k,
                                     std::move(params.u), std::move(params.v));
}

MFResult train_mf(const data::RatingsDataset& train, const MFConfig& config) {
  if (train.empty()) throw std::invalid_argument("train_mf: empty dataset");
  if (config.rank == 0 || config.epochs == 0) {
    throw std::invalid_argument("train_mf: rank and epochs must be >= 1");
  }
  if (!(config.regularization >= 0.0) || !(config.learning_rate >= 0.0)) {
    throw std::invalid_argument("train_mf: learning rate and regularization must be >= 0");
  }
  const std::size_t k = config.rank;
  const double scale =
      config.init_scale > 0.0 ? config.init_scale : 1.0 / std::sqrt(static_cast<double>(k));
  Rng rng(config.seed);
  std::vector<double> u(train.m * k), v(train.n * k);
  for (double& x : u) x = scale * rng.uniform();
  for (double& x : v) x = scale * rng.uniform();

  std::vector<std::size_t> order(train.size());
  for (std::size_t t = 0; t < order.size(); ++t) order[t] = t;
  std::vector<double> old_user(k);
  const double lr = config.learning_rate;
  const double reg = config.regularization;

  MFResult result;
  result.epoch_rmse.reserve(config.epochs);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order.begin(), order.end());
    for (std::size_t t : order) {
      const data::Rating& r = train.triplets[t];
      std::span<double> ui(u.data() + r.user * k, k);
      std::span<double> vj(v.data() + r.item * k, k);
      const double err = r.value - kernels::dot(ui, vj);
      std::copy(ui.begin(), ui.end(), old_user.begin());
      // U_i <- (1 - lr reg) U_i + lr e V_j, and likewise for V_j with the old U_i.
      for (double& x : ui) x *= 1.0 - lr * reg;
      kernels::axpy(lr * err, vj, ui);
      for (double& x : vj) x *= 1.0 - lr * reg;
      kernels::axpy(lr * err, old_user, vj);
    }
    double sse = 0.0;
    for (const data::Rating& r : train.triplets) {
      const double err =
          r.value - kernels::dot({u.data() + r.user * k, k}, {v.data() + r.item * k, k});
      sse += err * err;
    }
    result.epoch_rmse.push_back(std::sqrt(sse / static_cast<double>(train.size())));
  }
  result.scorer =
      std::make_unique<DotScorer>("mf", train.m, train.n, k, std::move(u), std::move(v));
  return result;
}

}  // namespace greyshot
