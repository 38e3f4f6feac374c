#include "greyshot/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "greyshot/random.hpp"

namespace greyshot::data {

namespace {

double standard_normal(Rng& rng) {
  // Box-Muller; 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

class ZipfSampler {
 public:
  ZipfSampler(std::size_t count, double exponent) : cdf_(count) {
    double total = 0.0;
    for (std::size_t r = 0; r < count; ++r) {
      total += 1.0 / std::pow(static_cast<double>(r + 1), exponent);
      cdf_[r] = total;
    }
    for (double& c : cdf_) c /= total;
  }

  std::size_t operator()(Rng& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
};

std::uint64_t cell_key(std::size_t i, std::size_t j) {
  return (static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint64_t>(j);
}

}  // namespace

SyntheticSpec movielens_1m_shape(std::uint64_t seed) {
  SyntheticSpec spec;
  spec.users = 6040;
  spec.items = 3706;
  spec.ratings = 1000209;
  spec.seed = seed;
  return spec;
}

SyntheticSpec ldos_comoda_shape(std::uint64_t seed) {
  SyntheticSpec spec;
  spec.users = 121;
  spec.items = 1232;
  spec.ratings = 2296;
  spec.seed = seed;
  return spec;
}

SyntheticSpec synthetic_preset(std::string_view name, std::uint64_t seed) {
  if (name == "ml1m") return movielens_1m_shape(seed);
  if (name == "ldos") return ldos_comoda_shape(seed);
  throw std::invalid_argument("unknown synthetic preset: " + std::string(name));
}

RatingsDataset generate_synthetic(const SyntheticSpec& spec) {
  const std::size_t m = spec.users, n = spec.items;
  if (m == 0 || n == 0) throw std::invalid_argument("synthetic: empty shape");
  if (spec.ratings < std::max(m, n) || spec.ratings > m * n) {
    throw std::invalid_argument("synthetic: rating count must cover every user and item");
  }
  Rng rng(spec.seed);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(spec.ratings * 2);
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  cells.reserve(spec.ratings);
  std::vector<bool> item_covered(n, false);
  auto add = [&](std::size_t i, std::size_t j) {
    if (seen.insert(cell_key(i, j)).second) {
      cells.emplace_back(i, j);
      item_covered[j] = true;
    }
  };

  const ZipfSampler pick_user(m, spec.user_zipf);
  const ZipfSampler pick_item(n, spec.item_zipf);
  // Coverage pass, then power-law fill.
  for (std::size_t i = 0; i < m; ++i) add(i, pick_item(rng));
  for (std::size_t j = 0; j < n; ++j) {
    if (item_covered[j]) continue;
    std::size_t i = pick_user(rng);
    while (seen.count(cell_key(i, j))) i = rng.below(m);
    add(i, j);
  }
  while (cells.size() < spec.ratings) add(pick_user(rng), pick_item(rng));

  rng.shuffle(cells.begin(), cells.end());

  std::vector<double> user_effect(m), item_effect(n);
  for (double& e : user_effect) e = spec.user_effect_sd * standard_normal(rng);
  for (double& e : item_effect) e = spec.item_effect_sd * standard_normal(rng);

  std::vector<double> latent(cells.size());
  for (std::size_t t = 0; t < cells.size(); ++t) {
    latent[t] = user_effect[cells[t].first] + item_effect[cells[t].second] +
                spec.noise_sd * standard_normal(rng);
  }
  // Empirical quantile cuts reproduce the star shares.
  std::vector<double> sorted = latent;
  std::sort(sorted.begin(), sorted.end());
  std::array<double, 4> cuts{};
  double share_total = 0.0;
  for (double s : spec.star_share) share_total += s;
  double share = 0.0;
  for (std::size_t s = 0; s < 4; ++s) {
    share += spec.star_share[s] / share_total;
    const auto pos = static_cast<std::size_t>(share * static_cast<double>(sorted.size()));
    cuts[s] = sorted[std::min(pos, sorted.size() - 1)];
  }

  std::vector<Rating> triplets;
  triplets.reserve(cells.size());
  for (std::size_t t = 0; t < cells.size(); ++t) {
    std::size_t stars = 1;
    while (stars < 5 && latent[t] >= cuts[stars - 1]) ++stars;
    triplets.push_back(Rating{cells[t].first, cells[t].second, static_cast<double>(stars)});
  }
  return from_triplets(std::move(triplets), m, n, 1.0, 5.0);
}

}  // namespace greyshot::data
