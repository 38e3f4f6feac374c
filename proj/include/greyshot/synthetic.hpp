#pragma once
// Seeded same-shape stand-ins for the public rating datasets, used when the
// real files are not available. Item popularity and user activity follow
// Zipf laws; star values are binned from a latent user + item + noise score
// so the overall histogram matches the configured marginal.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

#include "greyshot/dataset.hpp"

namespace greyshot::data {

struct SyntheticSpec {
  std::size_t users = 0;
  std::size_t items = 0;
  std::size_t ratings = 0;
  double item_zipf = 1.0;
  double user_zipf = 0.8;
  // Share of 1..5 star ratings.
  std::array<double, 5> star_share{0.0562, 0.1075, 0.2611, 0.3489, 0.2263};
  double item_effect_sd = 0.5;
  double user_effect_sd = 0.4;
  double noise_sd = 0.8;
  std::uint64_t seed = 0;
};

// 6040 users x 3706 items, 1,000,209 ratings.
SyntheticSpec movielens_1m_shape(std::uint64_t seed);

// 121 users x 1232 items, 2,296 ratings.
SyntheticSpec ldos_comoda_shape(std::uint64_t seed);

// Looks up "ml1m" or "ldos". Throws std::invalid_argument otherwise.
SyntheticSpec synthetic_preset(std::string_view name, std::uint64_t seed);

// Every user and item appears at least once; no duplicate cells.
RatingsDataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace greyshot::data
