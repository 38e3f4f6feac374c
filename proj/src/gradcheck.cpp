#include "greyshot/gradcheck.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "greyshot/model.hpp"
#include "greyshot/random.hpp"

namespace greyshot::gradcheck {

namespace {

using Wide = long double;

Wide power_term(Wide a, Wide b, Wide x) {
  const Wide g = (1.0L - b / a) * std::exp(-a * x) + b / a;
  return std::exp(g * std::log(g));
}

Wide dot_wide(const std::vector<double>& u, const std::vector<double>& v) {
  Wide s = 0.0L;
  for (std::size_t k = 0; k < u.size(); ++k) s += static_cast<Wide>(u[k]) * v[k];
  return s;
}

void record(GradientStats& stats, double analytic, Wide fd, const Options& opt) {
  ++stats.entries;
  const double truth = static_cast<double>(fd);
  const double diff = std::abs(analytic - truth);
  if (std::abs(truth) < opt.small_value) {
    stats.max_abs_error_small = std::max(stats.max_abs_error_small, diff);
    if (!(diff <= opt.abs_tol)) ++stats.failures;
  } else {
    const double rel = diff / std::abs(truth);
    stats.max_rel_error = std::max(stats.max_rel_error, rel);
    if (!(rel <= opt.rel_tol)) ++stats.failures;
  }
}

}  // namespace

Report run(const Options& opt) {
  static constexpr std::array<std::size_t, 3> kRanks{1, 4, 16};
  Rng rng(opt.seed);
  Report report;
  const Wide h = opt.step;
  while (report.points < opt.trials) {
    const std::size_t k = kRanks[rng.below(kRanks.size())];
    model::GreyShotParams p;
    p.m = p.n = 1;
    p.k = k;
    p.a = rng.uniform(0.2, 2.0);
    p.b = rng.uniform(-1.0, 1.0);
    p.u.resize(k);
    p.v.resize(k);
    for (double& x : p.u) x = rng.uniform();
    for (double& x : p.v) x = rng.uniform();

    const Wide x = dot_wide(p.u, p.v);
    const Wide a = p.a, b = p.b;
    const Wide g = (1.0L - b / a) * std::exp(-a * x) + b / a;
    if (g < opt.min_g) {
      ++report.rejected_points;
      continue;
    }
    ++report.points;

    const Wide fd_a = (power_term(a + h, b, x) - power_term(a - h, b, x)) / (2 * h);
    const Wide fd_b = (power_term(a, b + h, x) - power_term(a, b - h, x)) / (2 * h);
    record(report.a, model::grad_a(p, 0, 0), fd_a, opt);
    record(report.b, model::grad_b(p, 0, 0), fd_b, opt);

    const std::vector<double> gu = model::grad_u(p, 0, 0);
    const std::vector<double> gv = model::grad_v(p, 0, 0);
    for (std::size_t c = 0; c < k; ++c) {
      // Perturbing U_ic moves x by +-h V_jc, and symmetrically for V_jc.
      const Wide du = h * p.v[c], dv = h * p.u[c];
      const Wide fd_u = (power_term(a, b, x + du) - power_term(a, b, x - du)) / (2 * h);
      const Wide fd_v = (power_term(a, b, x + dv) - power_term(a, b, x - dv)) / (2 * h);
      record(report.u, gu[c], fd_u, opt);
      record(report.v, gv[c], fd_v, opt);
    }
  }
  return report;
}

}  // namespace greyshot::gradcheck
