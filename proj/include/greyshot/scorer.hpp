#pragma once
// Uniform prediction contract shared by GreyShot and the baselines.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "greyshot/dataset.hpp"
#include "greyshot/model.hpp"

namespace greyshot {

class Scorer {
 public:
  virtual ~Scorer() = default;

  virtual std::string name() const = 0;
  virtual std::size_t users() const = 0;
  virtual std::size_t items() const = 0;

  // Deterministic and side-effect free. Throws std::out_of_range for bad cells.
  virtual double predict(std::size_t i, std::size_t j) const = 0;

  // out[j] = predict(i, j) for all items; out.size() must equal items().
  virtual void score_user(std::size_t i, std::span<double> out) const;
};

// U_i . V_j over row-major factor matrices.
class DotScorer final : public Scorer {
 public:
  DotScorer(std::string name, std::size_t m, std::size_t n, std::size_t k,
            std::vector<double> u, std::vector<double> v);

  std::string name() const override { return name_; }
  std::size_t users() const override { return m_; }
  std::size_t items() const override { return n_; }
  std::size_t rank() const { return k_; }
  double predict(std::size_t i, std::size_t j) const override;
  void score_user(std::size_t i, std::span<double> out) const override;

 private:
  std::string name_;
  std::size_t m_, n_, k_;
  std::vector<double> u_, v_;
};

// Uniform [lo, hi) per cell, derived from a hash of (seed, i, j).
class RandomScorer final : public Scorer {
 public:
  RandomScorer(std::size_t m, std::size_t n, double rating_min, double rating_max,
               std::uint64_t seed);

  std::string name() const override { return "random"; }
  std::size_t users() const override { return m_; }
  std::size_t items() const override { return n_; }
  double predict(std::size_t i, std::size_t j) const override;

 private:
  std::size_t m_, n_;
  double lo_, hi_;
  std::uint64_t seed_;
};

std::unique_ptr<Scorer> random_scorer(std::size_t m, std::size_t n, double rating_min,
                                      double rating_max, std::uint64_t seed);

std::unique_ptr<Scorer> greyshot_scorer(model::GreyShotParams params);

struct MFConfig {
  std::size_t rank = 10;
  double learning_rate = 0.01;
  double regularization = 0.02;
  std::size_t epochs = 30;
  std::uint64_t seed = 42;
  double init_scale = 0.0;  // <= 0 selects 1/sqrt(rank)
};

struct MFResult {
  std::unique_ptr<Scorer> scorer;
  std::vector<double> epoch_rmse;  // training RMSE measured after each epoch
};

// Classic squared-error matrix factorization trained by shuffled-epoch SGD:
// e = R_ij - U_i.V_j; U_i += lr (e V_j - reg U_i); V_j += lr (e U_i - reg V_j).
MFResult train_mf(const data::RatingsDataset& train, const MFConfig& config);

}  // namespace greyshot
