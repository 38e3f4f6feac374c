#pragma once
// Multi-trial comparison harness: per trial, split the data, build each
// algorithm's scorer, then measure MAE on the held-out side and DME over the
// top-L popularity profile of all users.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "greyshot/dataset.hpp"
#include "greyshot/metrics.hpp"
#include "greyshot/model.hpp"
#include "greyshot/scorer.hpp"

namespace greyshot::experiment {

enum class Algorithm { GreyShot, MF, Random };

std::string_view algorithm_name(Algorithm algo);

// Configuration problems detected before any work starts.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Throws ConfigError for names outside {greyshot, mf, random}.
Algorithm parse_algorithm(std::string_view name);
std::vector<Algorithm> parse_algorithm_list(std::string_view comma_separated);

struct ExperimentConfig {
  std::vector<Algorithm> algorithms{Algorithm::GreyShot, Algorithm::MF, Algorithm::Random};
  std::size_t trials = 10;
  std::uint64_t base_seed = 1;
  double test_fraction = 0.2;
  std::size_t top_l = 10;
  model::TrainConfig greyshot;
  MFConfig mf;
  metrics::RescalePolicy greyshot_rescale = metrics::RescalePolicy::minmax(1.0, 5.0);
  metrics::RescalePolicy mf_rescale = metrics::RescalePolicy::none();
  metrics::RescalePolicy random_rescale = metrics::RescalePolicy::none();
  // Rescale targets follow the dataset's rating range when true.
  bool rescale_to_dataset_range = true;
  std::size_t workers = 1;

  // Throws ConfigError.
  void validate() const;
};

struct TrialReport {
  Algorithm algorithm = Algorithm::GreyShot;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double mae = 0.0;
  std::optional<double> dme;  // empty when the popularity profile is uniform
  std::uint64_t skipped_steps = 0;
  double milliseconds = 0.0;

  // Equality ignoring wall time.
  bool same_result(const TrialReport& other) const;
};

struct SummaryRow {
  Algorithm algorithm = Algorithm::GreyShot;
  double mae_min = 0.0, mae_avg = 0.0, mae_max = 0.0;
  std::optional<double> dme_min, dme_avg, dme_max;
  std::size_t dme_undefined = 0;
  std::size_t trials = 0;
};

struct SummaryTable {
  std::vector<SummaryRow> rows;
  std::vector<TrialReport> trials;

  const SummaryRow& row(Algorithm algo) const;
};

// Seed of trial t is base_seed + t; it drives the split, the initialization
// and the random baseline.
std::uint64_t trial_seed(const ExperimentConfig& config, std::size_t trial_index);

// Evaluates one algorithm on an explicit split.
TrialReport run_trial_on_split(const ExperimentConfig& config, Algorithm algorithm,
                               std::size_t trial_index, const data::Split& split);

TrialReport run_trial(const data::RatingsDataset& dataset, const ExperimentConfig& config,
                      Algorithm algorithm, std::size_t trial_index);

SummaryTable summarize(const std::vector<TrialReport>& reports,
                       const std::vector<Algorithm>& order);

// Runs every (algorithm, trial) pair using up to config.workers threads.
// Errors are rethrown with the algorithm, trial and seed attached.
SummaryTable run_experiment(const data::RatingsDataset& dataset,
                            const ExperimentConfig& config);

// trials.csv: algorithm,trial,seed,mae,dme,skipped_steps,ms
void write_trials_csv(std::ostream& out, const std::vector<TrialReport>& reports,
                      bool include_timing = true);
// summary.csv: algorithm,mae_min,mae_avg,mae_max,dme_min,dme_avg,dme_max,dme_undefined_count
void write_summary_csv(std::ostream& out, const SummaryTable& table);
void write_summary_text(std::ostream& out, const SummaryTable& table);

// Writes trials.csv, summary.csv, summary.txt and config.json into dir.
void write_outputs(const std::filesystem::path& dir, const SummaryTable& table,
                   const ExperimentConfig& config, const std::string& dataset_label);

// Metric values as text with 9 significant digits.
std::string format_metric(double value);

}  // namespace greyshot::experiment
