#pragma once
// Sparse rating triplets with dense id compaction, the MovieLens 1M and
// generic delimited loaders, and seeded train/test splitting.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace greyshot::data {

struct Rating {
  std::size_t user = 0;
  std::size_t item = 0;
  double value = 0.0;

  bool operator==(const Rating&) const = default;
  auto operator<=>(const Rating&) const = default;
};

// Original id -> dense index, assigned in first-appearance order.
class IdMap {
 public:
  std::size_t intern(const std::string& id);
  std::size_t size() const { return ids_.size(); }
  const std::string& original(std::size_t index) const { return ids_.at(index); }
  std::optional<std::size_t> find(const std::string& id) const;

  bool operator==(const IdMap& other) const { return ids_ == other.ids_; }

 private:
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> ids_;
};

struct RatingsDataset {
  std::vector<Rating> triplets;
  std::size_t m = 0;
  std::size_t n = 0;
  double rating_min = 1.0;
  double rating_max = 5.0;
  std::shared_ptr<const IdMap> users;
  std::shared_ptr<const IdMap> items;

  bool empty() const { return triplets.empty(); }
  std::size_t size() const { return triplets.size(); }

  // Throws std::logic_error if an index or rating violates the dimensions.
  void validate() const;

  bool operator==(const RatingsDataset& other) const;
};

// Parse failure carrying the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// UserID::MovieID::Rating::Timestamp, rating range fixed to [1, 5].
RatingsDataset load_movielens(const std::filesystem::path& path);

struct DelimitedOptions {
  char delimiter = ',';
  std::size_t user_col = 0;
  std::size_t item_col = 1;
  std::size_t rating_col = 2;
  bool skip_header = false;
  std::optional<double> rating_min;  // inferred from data when absent
  std::optional<double> rating_max;
};

RatingsDataset load_delimited(const std::filesystem::path& path,
                              const DelimitedOptions& options = {});

// Writes user,item,rating lines using the original ids.
void write_delimited(const RatingsDataset& dataset, const std::filesystem::path& path,
                     char delimiter = ',');

struct SplitSpec {
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
};

struct Split {
  RatingsDataset train;
  RatingsDataset test;
};

// Seeded shuffle; the first ceil(fraction * count) triplets form the test side.
// Both sides keep the parent's dimensions, range and id maps.
Split split(const RatingsDataset& dataset, const SplitSpec& spec);

// Seeded uniform sample of `count` triplets, re-compacted to dense ids.
RatingsDataset subsample(const RatingsDataset& dataset, std::size_t count,
                         std::uint64_t seed);

// Builds a dataset from already-dense triplets (ids are the decimal indices).
RatingsDataset from_triplets(std::vector<Rating> triplets, std::size_t m, std::size_t n,
                             double rating_min, double rating_max);

}  // namespace greyshot::data
