#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "greyshot/metrics.hpp"
#include "greyshot/random.hpp"

using namespace greyshot;
using namespace greyshot::metrics;

namespace {

// Scorer over an explicit score table.
class TableScorer final : public Scorer {
 public:
  TableScorer(std::size_t m, std::size_t n, std::vector<double> s) : m_(m), n_(n), s_(std::move(s)) {}
  std::string name() const override { return "table"; }
  std::size_t users() const override { return m_; }
  std::size_t items() const override { return n_; }
  double predict(std::size_t i, std::size_t j) const override {
    if (i >= m_ || j >= n_) throw std::out_of_range("table");
    return s_[i * n_ + j];
  }

 private:
  std::size_t m_, n_;
  std::vector<double> s_;
};

}  // namespace

TEST_CASE("mae examples") {
  const std::vector<double> r{1, 2, 3, 4};
  CHECK(mae(r, r, RescalePolicy::none()) == 0.0);
  CHECK(mae(std::vector<double>{1.5, 2.5, 3.5, 4.5}, r, RescalePolicy::none()) == 0.5);
  CHECK(mae(std::vector<double>{1.5, 2, 2, 5}, r, RescalePolicy::none()) == 0.625);
  CHECK_THROWS_AS(mae(std::vector<double>{}, std::vector<double>{}, RescalePolicy::none()),
                  std::invalid_argument);
  CHECK_THROWS_AS(mae(std::vector<double>{2, 2}, std::vector<double>{1, 3},
                      RescalePolicy::minmax(1, 5)),
                  std::invalid_argument);
}

TEST_CASE("mae over a scorer uses the test triplets") {
  const TableScorer s(2, 2, {1.5, 2, 2, 5});
  const std::vector<data::Rating> test{{0, 0, 1}, {0, 1, 2}, {1, 0, 3}, {1, 1, 4}};
  CHECK(mae(s, test, RescalePolicy::none()) == 0.625);
  // minmax maps [1.5, 5] onto [1, 5].
  const double lo = 1.0, scale = 4.0 / 3.5;
  const double expected = (std::abs(1 - lo) + std::abs(2 - (lo + 0.5 * scale)) +
                           std::abs(3 - (lo + 0.5 * scale)) + std::abs(4 - 5.0)) / 4;
  CHECK(mae(s, test, RescalePolicy::minmax(1, 5)) == doctest::Approx(expected).epsilon(1e-15));
  CHECK_THROWS_AS(mae(s, std::vector<data::Rating>{}, RescalePolicy::none()), std::invalid_argument);
}

TEST_CASE("mae properties") {
  Rng rng(6);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> p(20), r(20);
    for (double& x : p) x = rng.uniform(0, 6);
    for (double& x : r) x = static_cast<double>(1 + rng.below(5));
    const double base = mae(p, r, RescalePolicy::none());
    CHECK(base >= 0.0);
    CHECK(mae(r, r, RescalePolicy::none()) == 0.0);
    std::vector<std::size_t> order(20);
    for (std::size_t k = 0; k < 20; ++k) order[k] = k;
    rng.shuffle(order.begin(), order.end());
    std::vector<double> p2(20), r2(20);
    for (std::size_t k = 0; k < 20; ++k) {
      p2[k] = p[order[k]];
      r2[k] = r[order[k]];
    }
    CHECK(mae(p2, r2, RescalePolicy::none()) == doctest::Approx(base).epsilon(1e-14));
    const auto mapped = rescale_minmax(p, 1.0, 5.0);
    CHECK(std::abs(*std::min_element(mapped.begin(), mapped.end()) - 1.0) <= 1e-12);
    CHECK(std::abs(*std::max_element(mapped.begin(), mapped.end()) - 5.0) <= 1e-12);
  }
}

TEST_CASE("dme hand-derived cases") {
  const double e1 = std::exp(-1.0);
  CHECK(std::abs(dme(std::vector<double>{100, 100 * e1, 100 * e1}) - (-0.5)) <= 1e-12);
  CHECK(std::abs(dme(std::vector<double>{7, 7 * e1}) - (-1.0)) <= 1e-12);
  PopularityProfile uniform;
  uniform.counts = {{0, 5}, {1, 5}, {2, 5}};
  CHECK_THROWS_AS(dme(uniform), DegenerateProfile);
  PopularityProfile single;
  single.counts = {{4, 9}};
  CHECK_THROWS_AS(dme(single), DegenerateProfile);
  CHECK_THROWS_AS(dme(PopularityProfile{}), std::invalid_argument);
}

TEST_CASE("dme is scale invariant and follows 1 - 2/s on the two-item family") {
  PopularityProfile p;
  p.counts = {{0, 40}, {1, 7}, {2, 13}, {3, 1}};
  const double base = dme(p);
  for (std::size_t c : {2u, 3u, 17u}) {
    PopularityProfile scaled;
    for (auto [item, count] : p.counts) scaled.counts[item] = count * c;
    CHECK(dme(scaled) == doctest::Approx(base).epsilon(1e-12));
  }
  double previous = -1e300;
  for (double s : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    const double v = dme(std::vector<double>{10.0, 10.0 * std::exp(-s)});
    CHECK(v == doctest::Approx(1 - 2 / s).epsilon(1e-12));
    CHECK(v > previous);  // grows with the skew s
    previous = v;
  }
}

TEST_CASE("popularity profile examples") {
  Rng rng(2);
  std::vector<double> scores(6 * 8);
  for (double& x : scores) x = rng.uniform();
  const TableScorer s(6, 8, scores);

  const auto all = popularity_profile(s, 8);
  CHECK(all.size() == 8);
  for (auto [item, count] : all.counts) CHECK(count == 6);

  const TableScorer one(1, 8, std::vector<double>(scores.begin(), scores.begin() + 8));
  const auto p1 = popularity_profile(one, 3);
  CHECK(p1.size() == 3);
  for (auto [item, count] : p1.counts) CHECK(count == 1);

  std::vector<double> dom(scores);
  for (std::size_t i = 0; i < 6; ++i) dom[i * 8] = 10.0;
  const auto top1 = popularity_profile(TableScorer(6, 8, dom), 1);
  CHECK(top1.counts == std::map<std::size_t, std::size_t>{{0, 6}});

  for (std::size_t L = 1; L <= 8; ++L) CHECK(popularity_profile(s, L).total() == 6 * L);

  // Ties go to the lower item id.
  const auto ties = popularity_profile(TableScorer(2, 4, std::vector<double>(8, 1.0)), 2);
  CHECK(ties.counts == std::map<std::size_t, std::size_t>{{0, 2}, {1, 2}});

  CHECK_THROWS_AS(popularity_profile(s, 0), std::invalid_argument);
  CHECK_THROWS_AS(popularity_profile(s, 9), std::invalid_argument);
}
