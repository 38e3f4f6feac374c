#include <doctest.h>

#include <sstream>

#include "greyshot/experiment.hpp"
#include "greyshot/synthetic.hpp"

using namespace greyshot;
using namespace greyshot::experiment;

namespace {

data::RatingsDataset small_dataset(std::uint64_t seed = 5) {
  return data::generate_synthetic({.users = 40, .items = 90, .ratings = 900, .seed = seed});
}

ExperimentConfig quick_config() {
  ExperimentConfig cfg;
  cfg.trials = 3;
  cfg.greyshot.iterations = 5000;
  cfg.mf.epochs = 5;
  return cfg;
}

std::string trials_csv(const SummaryTable& t) {
  std::ostringstream out;
  write_trials_csv(out, t.trials, false);
  return out.str();
}

}  // namespace

TEST_CASE("algorithm names parse and unknown names are configuration errors") {
  CHECK(parse_algorithm("greyshot") == Algorithm::GreyShot);
  CHECK(parse_algorithm_list("mf,random,mf").size() == 2);
  CHECK_THROWS_AS(parse_algorithm("zeromat"), ConfigError);
  CHECK_THROWS_AS(parse_algorithm_list(""), ConfigError);
  ExperimentConfig cfg;
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("run_trial is deterministic") {
  const auto ds = small_dataset();
  const auto cfg = quick_config();
  for (Algorithm algo : {Algorithm::GreyShot, Algorithm::MF, Algorithm::Random}) {
    const auto a = run_trial(ds, cfg, algo, 1);
    const auto b = run_trial(ds, cfg, algo, 1);
    CHECK(a.same_result(b));
    CHECK(a.seed == cfg.base_seed + 1);
    CHECK(a.mae >= 0.0);
  }
}

TEST_CASE("GreyShot trial reports ignore the training split's contents") {
  const auto ds = small_dataset();
  const auto cfg = quick_config();
  const auto parts = data::split(ds, {cfg.test_fraction, trial_seed(cfg, 0)});
  data::Split replaced = parts;
  const auto other = small_dataset(999);
  replaced.train.triplets = std::vector<data::Rating>(
      other.triplets.begin(), other.triplets.begin() + static_cast<std::ptrdiff_t>(parts.train.size()));
  for (auto& r : replaced.train.triplets) r.value = 6.0 - r.value;
  const auto a = run_trial_on_split(cfg, Algorithm::GreyShot, 0, parts);
  const auto b = run_trial_on_split(cfg, Algorithm::GreyShot, 0, replaced);
  CHECK(a.same_result(b));
  // MF, by contrast, reads the ratings.
  CHECK_FALSE(run_trial_on_split(cfg, Algorithm::MF, 0, parts)
                  .same_result(run_trial_on_split(cfg, Algorithm::MF, 0, replaced)));
}

TEST_CASE("summaries aggregate min/avg/max") {
  const auto ds = small_dataset();
  auto cfg = quick_config();
  cfg.trials = 1;
  const auto one = run_experiment(ds, cfg);
  for (const auto& row : one.rows) {
    CHECK(row.mae_min == row.mae_avg);
    CHECK(row.mae_avg == row.mae_max);
    if (row.dme_avg) CHECK(*row.dme_min == *row.dme_max);
  }
  cfg.trials = 4;
  const auto many = run_experiment(ds, cfg);
  CHECK(many.rows.size() == 3);
  CHECK(many.trials.size() == 12);
  for (const auto& row : many.rows) {
    CHECK(row.trials == 4);
    CHECK(row.mae_min <= row.mae_avg);
    CHECK(row.mae_avg <= row.mae_max);
    if (row.dme_avg) {
      CHECK(*row.dme_min <= *row.dme_avg);
      CHECK(*row.dme_avg <= *row.dme_max);
    }
  }
}

TEST_CASE("undefined DME is counted, not averaged") {
  std::vector<TrialReport> reports(3);
  reports[0].mae = 1.0;
  reports[0].dme = 0.5;
  reports[1].mae = 2.0;
  reports[2].mae = 3.0;
  reports[2].dme = 0.7;
  const auto t = summarize(reports, {Algorithm::GreyShot});
  const auto& row = t.row(Algorithm::GreyShot);
  CHECK(row.dme_undefined == 1);
  CHECK(*row.dme_avg == doctest::Approx(0.6));
  CHECK(row.mae_avg == 2.0);
  std::ostringstream csv;
  write_summary_csv(csv, t);
  CHECK(csv.str() ==
        "algorithm,mae_min,mae_avg,mae_max,dme_min,dme_avg,dme_max,dme_undefined_count\n"
        "greyshot,1,2,3,0.5,0.6,0.7,1\n");
}

TEST_CASE("parallel and sequential runs give identical outputs") {
  const auto ds = small_dataset();
  auto cfg = quick_config();
  const auto seq = run_experiment(ds, cfg);
  cfg.workers = 4;
  const auto par = run_experiment(ds, cfg);
  CHECK(trials_csv(seq) == trials_csv(par));
  CHECK(trials_csv(seq) == trials_csv(run_experiment(ds, quick_config())));
}

TEST_CASE("metric formatting uses nine significant digits") {
  CHECK(format_metric(0.885428022123) == "0.885428022");
  CHECK(format_metric(2.0) == "2");
}
