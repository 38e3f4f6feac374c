#include <doctest.h>

#include <cmath>
#include <vector>

#include "greyshot/grey.hpp"
#include "greyshot/random.hpp"

using namespace greyshot;
using namespace greyshot::grey;

namespace {

// Least squares for y ~ -a z + b by projecting y onto the orthogonalized
// columns of [1, z] (Gram-Schmidt), independent of the normal-equations path.
std::pair<double, double> projection_fit(const std::vector<double>& series, double alpha) {
  std::vector<double> acc(series.size());
  double s = 0;
  for (std::size_t t = 0; t < series.size(); ++t) acc[t] = (s += series[t]);
  std::vector<double> z, y;
  for (std::size_t k = 1; k < series.size(); ++k) {
    z.push_back(alpha * acc[k - 1] + (1 - alpha) * acc[k]);
    y.push_back(series[k]);
  }
  const double n = static_cast<double>(z.size());
  double zbar = 0, ybar = 0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    zbar += z[k] / n;
    ybar += y[k] / n;
  }
  double num = 0, den = 0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    num += (z[k] - zbar) * (y[k] - ybar);
    den += (z[k] - zbar) * (z[k] - zbar);
  }
  const double slope = num / den;  // = -a
  return {-slope, ybar - slope * zbar};
}

}  // namespace

TEST_CASE("ago and inverse_ago examples") {
  CHECK(ago(std::vector<double>{1, 1, 1, 1}) == std::vector<double>{1, 2, 3, 4});
  CHECK(ago(std::vector<double>{5}) == std::vector<double>{5});
  CHECK(ago(std::vector<double>{1, 2, 4, 8}) == std::vector<double>{1, 3, 7, 15});
  CHECK(inverse_ago(std::vector<double>{1, 3, 7, 15}) == std::vector<double>{1, 2, 4, 8});
  CHECK(inverse_ago(std::vector<double>{5}) == std::vector<double>{5});
  CHECK_THROWS_AS(ago(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(inverse_ago(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("ago roundtrip is exact and ago of nonnegative input is nondecreasing") {
  Rng rng(5);
  for (std::size_t len = 1; len <= 1000; len += (len < 20 ? 1 : 37)) {
    // Small integers keep every partial sum exactly representable.
    std::vector<double> s(len);
    for (double& x : s) x = static_cast<double>(rng.below(1000));
    const auto acc = ago(s);
    CHECK(inverse_ago(acc) == s);
    for (std::size_t t = 1; t < len; ++t) CHECK(acc[t] >= acc[t - 1]);
  }
}

TEST_CASE("fit_gm11 golden case matches the projection oracle") {
  const std::vector<double> series{1, 2, 4, 8};
  const auto [oa, ob] = projection_fit(series, 0.5);
  CHECK(oa == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
  CHECK(ob == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  const GM11Model m = fit_gm11(series, 0.5);
  CHECK(std::abs(m.a - (-2.0 / 3.0)) <= 1e-9);
  CHECK(std::abs(m.b - 2.0 / 3.0) <= 1e-9);
  CHECK(m.x0_first == 1.0);
  CHECK(std::abs(forecast_cumulative(m, 1) - (2 * std::exp(2.0 / 3.0) - 1)) <= 1e-9);
}

TEST_CASE("fit_gm11 rejects degenerate input") {
  for (double c : {1e-20, 0.5, 3.0, 1e12}) {
    CHECK_THROWS_AS(fit_gm11(std::vector<double>{c, c, c, c}), std::domain_error);
  }
  CHECK_THROWS_AS(fit_gm11(std::vector<double>{1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(fit_gm11(std::vector<double>{1, 2, 0, 3}), std::invalid_argument);
  CHECK_THROWS_AS(fit_gm11(std::vector<double>{1, 2, -1, 3}), std::invalid_argument);
  CHECK_THROWS_AS(fit_gm11(std::vector<double>{1, 2, 4, 8}, 1.5), std::invalid_argument);
}

TEST_CASE("fitted (a, b) is a local minimum of the residual sum of squares") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t len = 4 + rng.below(30);
    std::vector<double> s(len);
    for (double& x : s) x = rng.uniform(0.5, 10.0);
    const double alpha = rng.uniform();
    GM11Model m;
    try {
      m = fit_gm11(s, alpha);
    } catch (const std::domain_error&) {
      continue;
    }
    const double best = residual_sum_of_squares(s, alpha, m.a, m.b);
    for (double da : {-1e-3, 0.0, 1e-3}) {
      for (double db : {-1e-3, 0.0, 1e-3}) {
        CHECK(residual_sum_of_squares(s, alpha, m.a + da, m.b + db) >= best);
      }
    }
  }
}

TEST_CASE("forecast_cumulative examples") {
  const GM11Model m{-2.0 / 3.0, 2.0 / 3.0, 1.0, 0.5};
  CHECK(forecast_cumulative(m, 0) == 1.0);
  CHECK(forecast_cumulative(m, 1) == doctest::Approx(2.8955).epsilon(1e-4));
  const GM11Model flat{1.0, 1.0, 1.0, 0.5};
  for (std::size_t t : {0u, 1u, 5u, 50u}) CHECK(forecast_cumulative(flat, t) == 1.0);
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const GM11Model r{rng.uniform(0.01, 2.0) * (rng.below(2) ? 1 : -1), rng.uniform(-5, 5),
                      rng.uniform(-10, 10), rng.uniform()};
    CHECK(forecast_cumulative(r, 0) == r.x0_first);
  }
  CHECK_THROWS_AS(forecast_cumulative(GM11Model{0.0, 1.0, 1.0, 0.5}, 1), std::invalid_argument);
}

TEST_CASE("forecast_restored differences the cumulative curve") {
  const GM11Model flat{1.0, 1.0, 1.0, 0.5};
  for (double v : forecast_restored(flat, 5)) CHECK(v == 0.0);
  CHECK(forecast_restored(flat, 1).size() == 1);
  CHECK_THROWS_AS(forecast_restored(flat, 0), std::invalid_argument);

  const GM11Model m = fit_gm11(std::vector<double>{1, 2, 4, 8});
  const auto r = forecast_restored(m, 3);
  REQUIRE(r.size() == 3);
  // F(t) = 2 e^{2t/3} - 1 for the golden fit.
  auto F = [](double t) { return 2 * std::exp(2 * t / 3) - 1; };
  for (std::size_t k = 1; k <= 3; ++k) {
    CHECK(r[k - 1] == doctest::Approx(F(k) - F(k - 1)).epsilon(1e-9));
  }
}

TEST_CASE("a known model reproduces its series and refitting recovers (a, b)") {
  Rng rng(23);
  int checked = 0;
  while (checked < 100) {
    const double a = rng.uniform(-0.5, 0.5);
    if (std::abs(a) < 0.02) continue;
    const double x0 = rng.uniform(0.5, 5.0);
    // Pick b so every generated increment is positive.
    const double b = a < 0 ? rng.uniform(0.1, 3.0) : a * (x0 + rng.uniform(1.0, 20.0));
    const GM11Model truth{a, b, x0, 0.5};
    const std::size_t len = 4 + rng.below(12);
    std::vector<double> series{x0};
    for (std::size_t k = 2; k <= len; ++k) {
      series.push_back((x0 - b / a) *
                       (std::exp(-a * static_cast<double>(k - 1)) - std::exp(-a * static_cast<double>(k - 2))));
    }
    const auto restored = forecast_restored(truth, len - 1);
    for (std::size_t k = 1; k < len; ++k) {
      CHECK(restored[k - 1] == doctest::Approx(series[k]).epsilon(1e-9));
    }
    const GM11Model fit = fit_gm11(series, 0.5);
    CHECK(std::abs(fit.a - a) <= 0.05 * std::abs(a));
    CHECK(std::abs(fit.b - b) <= 0.05 * std::abs(b));
    ++checked;
  }
}
