#include "greyshot/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string_view>

#include "greyshot/random.hpp"

namespace greyshot::data {

namespace {

std::vector<std::string_view> split_fields(std::string_view line, std::string_view sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + sep.size();
  }
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

struct Builder {
  std::shared_ptr<IdMap> users = std::make_shared<IdMap>();
  std::shared_ptr<IdMap> items = std::make_shared<IdMap>();
  std::vector<Rating> triplets;

  void add(std::string_view user, std::string_view item, double value) {
    triplets.push_back(Rating{users->intern(std::string(trim(user))),
                              items->intern(std::string(trim(item))), value});
  }

  RatingsDataset finish(double lo, double hi) && {
    RatingsDataset ds;
    ds.m = users->size();
    ds.n = items->size();
    ds.triplets = std::move(triplets);
    ds.rating_min = lo;
    ds.rating_max = hi;
    ds.users = std::move(users);
    ds.items = std::move(items);
    return ds;
  }
};

}  // namespace

std::size_t IdMap::intern(const std::string& id) {
  auto [it, inserted] = index_.try_emplace(id, ids_.size());
  if (inserted) ids_.push_back(id);
  return it->second;
}

std::optional<std::size_t> IdMap::find(const std::string& id) const {
  if (auto it = index_.find(id); it != index_.end()) return it->second;
  return std::nullopt;
}

void RatingsDataset::validate() const {
  for (const Rating& r : triplets) {
    if (r.user >= m || r.item >= n) throw std::logic_error("triplet index out of range");
    if (r.value < rating_min || r.value > rating_max) {
      throw std::logic_error("rating outside the dataset's rating range");
    }
  }
  if (users && users->size() != m) throw std::logic_error("user id map size mismatch");
  if (items && items->size() != n) throw std::logic_error("item id map size mismatch");
}

bool RatingsDataset::operator==(const RatingsDataset& other) const {
  auto same_map = [](const std::shared_ptr<const IdMap>& x,
                     const std::shared_ptr<const IdMap>& y) {
    if (!x || !y) return !x && !y;
    return *x == *y;
  };
  return triplets == other.triplets && m == other.m && n == other.n &&
         rating_min == other.rating_min && rating_max == other.rating_max &&
         same_map(users, other.users) && same_map(items, other.items);
}

RatingsDataset load_movielens(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  Builder builder;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line, "::");
    if (fields.size() != 4) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                           ": expected UserID::MovieID::Rating::Timestamp",
                       line_no);
    }
    const auto value = parse_number(fields[2]);
    if (!value || trim(fields[0]).empty() || trim(fields[1]).empty()) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": malformed rating",
                       line_no);
    }
    if (*value < 1.0 || *value > 5.0) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                           ": rating outside [1, 5]",
                       line_no);
    }
    builder.add(fields[0], fields[1], *value);
  }
  if (builder.triplets.empty()) throw std::runtime_error(path.string() + ": no ratings");
  return std::move(builder).finish(1.0, 5.0);
}

RatingsDataset load_delimited(const std::filesystem::path& path,
                              const DelimitedOptions& options) {
  if (options.user_col == options.item_col || options.user_col == options.rating_col ||
      options.item_col == options.rating_col) {
    throw std::invalid_argument("user, item and rating columns must be distinct");
  }
  const std::size_t needed =
      std::max({options.user_col, options.item_col, options.rating_col}) + 1;
  std::ifstream in = open_input(path);
  Builder builder;
  std::string line;
  std::size_t line_no = 0;
  const std::string sep(1, options.delimiter);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && options.skip_header) continue;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line, sep);
    if (fields.size() < needed) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected at least " +
                           std::to_string(needed) + " columns",
                       line_no);
    }
    const auto value = parse_number(fields[options.rating_col]);
    if (!value) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                           ": non-numeric rating '" +
                           std::string(fields[options.rating_col]) + "'",
                       line_no);
    }
    lo = std::min(lo, *value);
    hi = std::max(hi, *value);
    builder.add(fields[options.user_col], fields[options.item_col], *value);
  }
  if (builder.triplets.empty()) throw std::runtime_error(path.string() + ": no ratings");
  const double range_min = options.rating_min.value_or(lo);
  const double range_max = options.rating_max.value_or(hi);
  if (range_min > lo || range_max < hi) {
    throw std::runtime_error(path.string() + ": ratings fall outside the given range");
  }
  return std::move(builder).finish(range_min, range_max);
}

void write_delimited(const RatingsDataset& dataset, const std::filesystem::path& path,
                     char delimiter) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << std::setprecision(17);
  for (const Rating& r : dataset.triplets) {
    out << (dataset.users ? dataset.users->original(r.user) : std::to_string(r.user))
        << delimiter
        << (dataset.items ? dataset.items->original(r.item) : std::to_string(r.item))
        << delimiter << r.value << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Split split(const RatingsDataset& dataset, const SplitSpec& spec) {
  if (dataset.empty()) throw std::invalid_argument("split: empty dataset");
  if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0)) {
    throw std::invalid_argument("split: test fraction must lie in (0, 1)");
  }
  const std::size_t count = dataset.size();
  // Guard against 0.2 * 10 rounding up to 3.
  const double exact = spec.test_fraction * static_cast<double>(count);
  std::size_t test_count = static_cast<std::size_t>(std::ceil(exact - 1e-9 * exact));
  if (test_count == 0 || test_count >= count) {
    throw std::invalid_argument("split: fraction leaves one side empty");
  }
  std::vector<std::size_t> order(count);
  for (std::size_t t = 0; t < count; ++t) order[t] = t;
  Rng rng(spec.seed);
  rng.shuffle(order.begin(), order.end());

  Split out{dataset, dataset};
  out.test.triplets.clear();
  out.train.triplets.clear();
  out.test.triplets.reserve(test_count);
  out.train.triplets.reserve(count - test_count);
  for (std::size_t t = 0; t < count; ++t) {
    auto& side = t < test_count ? out.test.triplets : out.train.triplets;
    side.push_back(dataset.triplets[order[t]]);
  }
  return out;
}

RatingsDataset subsample(const RatingsDataset& dataset, std::size_t count,
                         std::uint64_t seed) {
  if (count == 0 || count > dataset.size()) {
    throw std::invalid_argument("subsample: count must be in [1, dataset size]");
  }
  std::vector<std::size_t> order(dataset.size());
  for (std::size_t t = 0; t < order.size(); ++t) order[t] = t;
  Rng rng(seed);
  rng.shuffle(order.begin(), order.end());
  order.resize(count);
  std::sort(order.begin(), order.end());

  Builder builder;
  for (std::size_t t : order) {
    const Rating& r = dataset.triplets[t];
    const std::string user =
        dataset.users ? dataset.users->original(r.user) : std::to_string(r.user);
    const std::string item =
        dataset.items ? dataset.items->original(r.item) : std::to_string(r.item);
    builder.add(user, item, r.value);
  }
  return std::move(builder).finish(dataset.rating_min, dataset.rating_max);
}

RatingsDataset from_triplets(std::vector<Rating> triplets, std::size_t m, std::size_t n,
                             double rating_min, double rating_max) {
  auto users = std::make_shared<IdMap>();
  auto items = std::make_shared<IdMap>();
  for (std::size_t i = 0; i < m; ++i) users->intern(std::to_string(i));
  for (std::size_t j = 0; j < n; ++j) items->intern(std::to_string(j));
  RatingsDataset ds;
  ds.triplets = std::move(triplets);
  ds.m = m;
  ds.n = n;
  ds.rating_min = rating_min;
  ds.rating_max = rating_max;
  ds.users = std::move(users);
  ds.items = std::move(items);
  ds.validate();
  return ds;
}

}  // namespace greyshot::data
