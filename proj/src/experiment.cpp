#include "greyshot/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace greyshot::experiment {

namespace {

const metrics::RescalePolicy& policy_for(const ExperimentConfig& config, Algorithm algo) {
  switch (algo) {
    case Algorithm::GreyShot: return config.greyshot_rescale;
    case Algorithm::MF: return config.mf_rescale;
    case Algorithm::Random: return config.random_rescale;
  }
  return config.mf_rescale;
}

std::string policy_text(const metrics::RescalePolicy& p) {
  if (p.mode == metrics::RescalePolicy::Mode::None) return "none";
  return "minmax[" + format_metric(p.target_min) + "," + format_metric(p.target_max) + "]";
}

std::string optional_metric(const std::optional<double>& v) {
  return v ? format_metric(*v) : "undefined";
}

}  // namespace

std::string_view algorithm_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::GreyShot: return "greyshot";
    case Algorithm::MF: return "mf";
    case Algorithm::Random: return "random";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "greyshot") return Algorithm::GreyShot;
  if (name == "mf") return Algorithm::MF;
  if (name == "random") return Algorithm::Random;
  throw ConfigError("unknown algorithm '" + std::string(name) +
                    "' (expected greyshot, mf or random)");
}

std::vector<Algorithm> parse_algorithm_list(std::string_view text) {
  std::vector<Algorithm> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string_view name = text.substr(start, comma - start);
    if (!name.empty()) {
      const Algorithm algo = parse_algorithm(name);
      if (std::find(out.begin(), out.end(), algo) == out.end()) out.push_back(algo);
    }
    start = comma + 1;
  }
  if (out.empty()) throw ConfigError("no algorithms selected");
  return out;
}

void ExperimentConfig::validate() const {
  if (algorithms.empty()) throw ConfigError("no algorithms selected");
  if (trials == 0) throw ConfigError("trials must be >= 1");
  if (top_l == 0) throw ConfigError("top-L must be >= 1");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test fraction must lie in (0, 1)");
  }
  if (workers == 0) throw ConfigError("workers must be >= 1");
  try {
    greyshot.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("greyshot: ") + e.what());
  }
  if (mf.rank == 0 || mf.epochs == 0 || !(mf.learning_rate >= 0.0) ||
      !(mf.regularization >= 0.0)) {
    throw ConfigError("mf: rank/epochs must be >= 1 and lr/reg >= 0");
  }
  for (const auto* p : {&greyshot_rescale, &mf_rescale, &random_rescale}) {
    if (p->mode == metrics::RescalePolicy::Mode::MinMax && !(p->target_min < p->target_max)) {
      throw ConfigError("rescale target_min must be < target_max");
    }
  }
}

bool TrialReport::same_result(const TrialReport& other) const {
  return algorithm == other.algorithm && trial == other.trial && seed == other.seed &&
         mae == other.mae && dme == other.dme && skipped_steps == other.skipped_steps;
}

const SummaryRow& SummaryTable::row(Algorithm algo) const {
  for (const SummaryRow& r : rows) {
    if (r.algorithm == algo) return r;
  }
  throw std::out_of_range("no summary row for " + std::string(algorithm_name(algo)));
}

std::uint64_t trial_seed(const ExperimentConfig& config, std::size_t trial_index) {
  return config.base_seed + static_cast<std::uint64_t>(trial_index);
}

TrialReport run_trial_on_split(const ExperimentConfig& config, Algorithm algorithm,
                               std::size_t trial_index, const data::Split& split) {
  const auto start = std::chrono::steady_clock::now();
  const data::RatingsDataset& train = split.train;
  const std::uint64_t seed = trial_seed(config, trial_index);

  TrialReport report;
  report.algorithm = algorithm;
  report.trial = trial_index;
  report.seed = seed;

  std::unique_ptr<Scorer> scorer;
  switch (algorithm) {
    case Algorithm::GreyShot: {
      model::TrainConfig gc = config.greyshot;
      gc.seed = seed;
      // Only the shape of the data reaches the trainer.
      model::TrainResult trained = model::train(train.m, train.n, gc);
      report.skipped_steps = trained.skipped_steps;
      scorer = greyshot_scorer(std::move(trained.params));
      break;
    }
    case Algorithm::MF: {
      MFConfig mc = config.mf;
      mc.seed = seed;
      scorer = train_mf(train, mc).scorer;
      break;
    }
    case Algorithm::Random:
      scorer = random_scorer(train.m, train.n, train.rating_min, train.rating_max, seed);
      break;
  }

  metrics::RescalePolicy policy = policy_for(config, algorithm);
  if (policy.mode == metrics::RescalePolicy::Mode::MinMax && config.rescale_to_dataset_range) {
    policy.target_min = train.rating_min;
    policy.target_max = train.rating_max;
  }
  report.mae = metrics::mae(*scorer, split.test.triplets, policy);

  const std::size_t top_l = std::min(config.top_l, scorer->items());
  try {
    report.dme = metrics::dme(metrics::popularity_profile(*scorer, top_l));
  } catch (const metrics::DegenerateProfile&) {
    report.dme.reset();
  }
  report.milliseconds =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

TrialReport run_trial(const data::RatingsDataset& dataset, const ExperimentConfig& config,
                      Algorithm algorithm, std::size_t trial_index) {
  config.validate();
  const data::Split parts =
      data::split(dataset, {config.test_fraction, trial_seed(config, trial_index)});
  return run_trial_on_split(config, algorithm, trial_index, parts);
}

SummaryTable summarize(const std::vector<TrialReport>& reports,
                       const std::vector<Algorithm>& order) {
  SummaryTable table;
  table.trials = reports;
  for (Algorithm algo : order) {
    SummaryRow row;
    row.algorithm = algo;
    double mae_sum = 0.0, dme_sum = 0.0;
    std::size_t dme_count = 0;
    for (const TrialReport& r : reports) {
      if (r.algorithm != algo) continue;
      if (row.trials == 0) {
        row.mae_min = row.mae_max = r.mae;
      } else {
        row.mae_min = std::min(row.mae_min, r.mae);
        row.mae_max = std::max(row.mae_max, r.mae);
      }
      mae_sum += r.mae;
      ++row.trials;
      if (!r.dme) {
        ++row.dme_undefined;
        continue;
      }
      row.dme_min = row.dme_min ? std::min(*row.dme_min, *r.dme) : *r.dme;
      row.dme_max = row.dme_max ? std::max(*row.dme_max, *r.dme) : *r.dme;
      dme_sum += *r.dme;
      ++dme_count;
    }
    if (row.trials == 0) continue;
    row.mae_avg = std::clamp(mae_sum / static_cast<double>(row.trials), row.mae_min, row.mae_max);
    if (dme_count > 0) {
      row.dme_avg =
          std::clamp(dme_sum / static_cast<double>(dme_count), *row.dme_min, *row.dme_max);
    }
    table.rows.push_back(row);
  }
  return table;
}

SummaryTable run_experiment(const data::RatingsDataset& dataset,
                            const ExperimentConfig& config) {
  config.validate();
  if (dataset.empty()) throw std::invalid_argument("experiment: empty dataset");

  struct Job {
    Algorithm algorithm;
    std::size_t trial;
  };
  std::vector<Job> jobs;
  for (Algorithm algo : config.algorithms) {
    for (std::size_t t = 0; t < config.trials; ++t) jobs.push_back({algo, t});
  }
  std::vector<TrialReport> reports(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t idx = next.fetch_add(1); idx < jobs.size(); idx = next.fetch_add(1)) {
      const Job& job = jobs[idx];
      try {
        reports[idx] = run_trial(dataset, config, job.algorithm, job.trial);
      } catch (const std::exception& e) {
        errors[idx] = std::make_exception_ptr(std::runtime_error(
            std::string(algorithm_name(job.algorithm)) + " trial " + std::to_string(job.trial) +
            " (seed " + std::to_string(trial_seed(config, job.trial)) + "): " + e.what()));
      }
    }
  };

  const std::size_t thread_count = std::min(config.workers, jobs.size());
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(thread_count);
    for (std::size_t t = 0; t < thread_count; ++t) pool.emplace_back(worker);
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return summarize(reports, config.algorithms);
}

std::string format_metric(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

void write_trials_csv(std::ostream& out, const std::vector<TrialReport>& reports,
                      bool include_timing) {
  out << "algorithm,trial,seed,mae,dme,skipped_steps" << (include_timing ? ",ms" : "") << '\n';
  for (const TrialReport& r : reports) {
    out << algorithm_name(r.algorithm) << ',' << r.trial << ',' << r.seed << ','
        << format_metric(r.mae) << ',' << optional_metric(r.dme) << ',' << r.skipped_steps;
    if (include_timing) {
      char ms[32];
      std::snprintf(ms, sizeof ms, "%.3f", r.milliseconds);
      out << ',' << ms;
    }
    out << '\n';
  }
}

void write_summary_csv(std::ostream& out, const SummaryTable& table) {
  out << "algorithm,mae_min,mae_avg,mae_max,dme_min,dme_avg,dme_max,dme_undefined_count\n";
  for (const SummaryRow& r : table.rows) {
    out << algorithm_name(r.algorithm) << ',' << format_metric(r.mae_min) << ','
        << format_metric(r.mae_avg) << ',' << format_metric(r.mae_max) << ','
        << optional_metric(r.dme_min) << ',' << optional_metric(r.dme_avg) << ','
        << optional_metric(r.dme_max) << ',' << r.dme_undefined << '\n';
  }
}

void write_summary_text(std::ostream& out, const SummaryTable& table) {
  auto line = [&out](std::string_view a, std::string_view b, std::string_view c,
                     std::string_view d) {
    out << std::left << std::setw(10) << a << std::right << std::setw(16) << b
        << std::setw(16) << c << std::setw(16) << d << '\n';
  };
  out << "MAE\n";
  line("", "Minimum", "Average", "Maximum");
  for (const SummaryRow& r : table.rows) {
    line(algorithm_name(r.algorithm), format_metric(r.mae_min), format_metric(r.mae_avg),
         format_metric(r.mae_max));
  }
  out << "\nDegree of Matthew Effect\n";
  line("", "Minimum", "Average", "Maximum");
  for (const SummaryRow& r : table.rows) {
    line(algorithm_name(r.algorithm), optional_metric(r.dme_min), optional_metric(r.dme_avg),
         optional_metric(r.dme_max));
    if (r.dme_undefined > 0) {
      out << "  (" << r.dme_undefined << " of " << r.trials
          << " trials had a uniform popularity profile)\n";
    }
  }
}

void write_outputs(const std::filesystem::path& dir, const SummaryTable& table,
                   const ExperimentConfig& config, const std::string& dataset_label) {
  std::filesystem::create_directories(dir);
  auto open = [&dir](const char* name) {
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("trials.csv");
    write_trials_csv(out, table.trials);
  }
  {
    auto out = open("summary.csv");
    write_summary_csv(out, table);
  }
  {
    auto out = open("summary.txt");
    write_summary_text(out, table);
  }
  nlohmann::ordered_json j;
  j["dataset"] = dataset_label;
  std::vector<std::string> algos;
  for (Algorithm a : config.algorithms) algos.emplace_back(algorithm_name(a));
  j["algorithms"] = algos;
  j["trials"] = config.trials;
  j["base_seed"] = config.base_seed;
  j["seed_rule"] = "trial seed = base_seed + trial index";
  j["test_fraction"] = config.test_fraction;
  j["top_l"] = config.top_l;
  j["greyshot"] = {{"rank", config.greyshot.rank},
                   {"learning_rate", config.greyshot.learning_rate},
                   {"iterations", config.greyshot.iterations},
                   {"init_scale", config.greyshot.effective_init_scale()},
                   {"init_a", config.greyshot.init_a},
                   {"init_b", config.greyshot.init_b},
                   {"g_floor", config.greyshot.g_floor},
                   {"direction", config.greyshot.direction == model::Direction::Ascent
                                     ? "ascent"
                                     : "descent"},
                   {"rescale", policy_text(config.greyshot_rescale)}};
  j["mf"] = {{"rank", config.mf.rank},
             {"learning_rate", config.mf.learning_rate},
             {"regularization", config.mf.regularization},
             {"epochs", config.mf.epochs},
             {"rescale", policy_text(config.mf_rescale)}};
  j["random"] = {{"rescale", policy_text(config.random_rescale)}};
  j["rescale_to_dataset_range"] = config.rescale_to_dataset_range;
  auto out = open("config.json");
  out << j.dump(2) << '\n';
}

}  // namespace greyshot::experiment
