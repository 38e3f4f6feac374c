// greyshot: command-line front end for the grey-model library, GreyShot
// training, gradient checking and the multi-trial experiment harness.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "greyshot/dataset.hpp"
#include "greyshot/experiment.hpp"
#include "greyshot/gradcheck.hpp"
#include "greyshot/grey.hpp"
#include "greyshot/kernels.hpp"
#include "greyshot/params_io.hpp"
#include "greyshot/synthetic.hpp"

namespace {

using namespace greyshot;

constexpr int kRuntimeError = 1;
constexpr int kConfigError = 2;

std::vector<double> read_column(const std::string& path, bool skip_header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && skip_header) continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      std::size_t used = 0;
      values.push_back(std::stod(line, &used));
      if (line.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": not a number");
    }
  }
  return values;
}

metrics::RescalePolicy parse_policy(const std::string& name) {
  if (name == "none") return metrics::RescalePolicy::none();
  if (name == "minmax") return metrics::RescalePolicy::minmax(1.0, 5.0);
  throw experiment::ConfigError("rescale policy must be none or minmax, got " + name);
}

struct GM11Args {
  std::string input;
  double alpha = grey::kDefaultAlpha;
  std::size_t horizon = 1;
  bool skip_header = false;
};

int run_gm11(const GM11Args& args) {
  const std::vector<double> series = read_column(args.input, args.skip_header);
  const grey::GM11Model model = grey::fit_gm11(series, args.alpha);
  std::cout << std::setprecision(17) << "a," << model.a << "\nb," << model.b << '\n';
  std::cout << "step,value\n";
  const std::vector<double> restored = grey::forecast_restored(model, args.horizon);
  for (std::size_t k = 0; k < restored.size(); ++k) {
    std::cout << (k + 1) << ',' << restored[k] << '\n';
  }
  return 0;
}

struct TrainArgs {
  std::size_t users = 0, items = 0;
  model::TrainConfig config;
  bool ascent = false;
  std::string out;
};

int run_train(TrainArgs args) {
  if (args.users == 0 || args.items == 0) {
    throw experiment::ConfigError("--users and --items must be >= 1");
  }
  if (args.ascent) args.config.direction = model::Direction::Ascent;
  try {
    args.config.validate();
  } catch (const std::invalid_argument& e) {
    throw experiment::ConfigError(e.what());
  }
  const model::TrainResult result = model::train(args.users, args.items, args.config);
  io::write_params(args.out, result.params);
  std::cerr << "trained " << args.users << "x" << args.items << " rank " << args.config.rank
            << ": a=" << result.params.a << " b=" << result.params.b
            << " skipped_steps=" << result.skipped_steps
            << " rejected_a_updates=" << result.rejected_a_updates << '\n';
  return 0;
}

int run_gradcheck(const gradcheck::Options& options) {
  const gradcheck::Report report = gradcheck::run(options);
  auto show = [](const char* name, const gradcheck::GradientStats& s) {
    std::cout << std::setw(7) << std::left << name << std::right
              << " max_rel_error=" << std::setprecision(3) << std::scientific << s.max_rel_error
              << " max_abs_error_small=" << s.max_abs_error_small << std::defaultfloat
              << " entries=" << s.entries << " failures=" << s.failures << '\n';
  };
  std::cout << "points=" << report.points << " rejected(g<" << options.min_g
            << ")=" << report.rejected_points << '\n';
  show("grad_a", report.a);
  show("grad_b", report.b);
  show("grad_u", report.u);
  show("grad_v", report.v);
  std::cout << (report.passed() ? "PASS" : "FAIL") << '\n';
  return report.passed() ? 0 : 1;
}

struct ExperimentArgs {
  std::string data;
  std::string format = "movielens";
  std::string synthetic;
  std::uint64_t synthetic_seed = 7;
  std::size_t subsample = 0;
  data::DelimitedOptions delimited;
  std::string delimiter = ",";
  std::optional<double> rating_min, rating_max;
  std::string algos = "greyshot,mf,random";
  std::string greyshot_rescale = "minmax", mf_rescale = "none", random_rescale = "none";
  bool ascent = false;
  std::string out_dir = "results";
  experiment::ExperimentConfig config;
};

int run_experiment_cmd(ExperimentArgs args) {
  auto& cfg = args.config;
  cfg.algorithms = experiment::parse_algorithm_list(args.algos);
  cfg.greyshot_rescale = parse_policy(args.greyshot_rescale);
  cfg.mf_rescale = parse_policy(args.mf_rescale);
  cfg.random_rescale = parse_policy(args.random_rescale);
  if (args.ascent) cfg.greyshot.direction = model::Direction::Ascent;
  if (args.data.empty() == args.synthetic.empty()) {
    throw experiment::ConfigError("give exactly one of --data or --synthetic");
  }
  if (args.format != "movielens" && args.format != "delimited") {
    throw experiment::ConfigError("--format must be movielens or delimited");
  }
  if (args.delimiter.size() != 1) throw experiment::ConfigError("--delimiter must be one character");
  cfg.validate();

  data::RatingsDataset dataset;
  std::string label;
  if (!args.synthetic.empty()) {
    dataset = data::generate_synthetic(data::synthetic_preset(args.synthetic, args.synthetic_seed));
    label = "synthetic:" + args.synthetic + ":seed=" + std::to_string(args.synthetic_seed);
  } else if (args.format == "movielens") {
    dataset = data::load_movielens(args.data);
    label = args.data;
  } else {
    args.delimited.delimiter = args.delimiter[0];
    args.delimited.rating_min = args.rating_min;
    args.delimited.rating_max = args.rating_max;
    dataset = data::load_delimited(args.data, args.delimited);
    label = args.data;
  }
  if (args.format == "movielens" && (args.rating_min || args.rating_max)) {
    dataset.rating_min = args.rating_min.value_or(dataset.rating_min);
    dataset.rating_max = args.rating_max.value_or(dataset.rating_max);
    dataset.validate();
  }
  if (args.subsample > 0) {
    dataset = data::subsample(dataset, args.subsample, args.synthetic_seed);
    label += ":subsample=" + std::to_string(args.subsample);
  }
  std::cerr << "dataset " << label << ": " << dataset.m << " users, " << dataset.n << " items, "
            << dataset.size() << " ratings; simd=" << kernels::backend_name(kernels::active_backend())
            << '\n';

  const experiment::SummaryTable table = experiment::run_experiment(dataset, cfg);
  experiment::write_outputs(args.out_dir, table, cfg, label);
  experiment::write_summary_text(std::cout, table);
  return 0;
}

struct SynthArgs {
  std::string preset = "ldos";
  std::uint64_t seed = 7;
  std::string out;
  std::string format = "delimited";
};

int run_synth(const SynthArgs& args) {
  const data::RatingsDataset ds = data::generate_synthetic(data::synthetic_preset(args.preset, args.seed));
  if (args.format == "movielens") {
    std::ofstream out(args.out);
    if (!out) throw std::runtime_error("cannot write " + args.out);
    for (const auto& r : ds.triplets) {
      out << ds.users->original(r.user) << "::" << ds.items->original(r.item)
          << "::" << r.value << "::0\n";
    }
  } else if (args.format == "delimited") {
    data::write_delimited(ds, args.out);
  } else {
    throw experiment::ConfigError("--format must be movielens or delimited");
  }
  std::cerr << "wrote " << ds.size() << " ratings (" << ds.m << " users, " << ds.n
            << " items) to " << args.out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GreyShot zero-shot recommender toolkit"};
  app.require_subcommand(1);
  std::string simd = "auto";
  app.add_option("--simd", simd, "Kernel backend: auto, scalar, avx2, neon")
      ->check(CLI::IsMember({"auto", "scalar", "avx2", "neon"}));

  // gm11 fit
  GM11Args gm;
  auto* gm11 = app.add_subcommand("gm11", "GM(1,1) grey model utilities");
  gm11->require_subcommand(1);
  auto* fit = gm11->add_subcommand("fit", "Fit GM(1,1) to a one-column series and forecast");
  fit->add_option("--input", gm.input, "File with one number per line")->required();
  fit->add_option("--alpha", gm.alpha, "Background weight")->check(CLI::Range(0.0, 1.0));
  fit->add_option("--horizon", gm.horizon, "Restored forecast length")->check(CLI::PositiveNumber);
  fit->add_flag("--skip-header", gm.skip_header, "Ignore the first line");

  // train
  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Train GreyShot parameters (no rating data needed)");
  train->add_option("--users", tr.users, "User count M")->required();
  train->add_option("--items", tr.items, "Item count N")->required();
  train->add_option("--rank", tr.config.rank, "Latent rank K");
  train->add_option("--lr", tr.config.learning_rate, "Learning rate");
  train->add_option("--iters", tr.config.iterations, "Sampled steps");
  train->add_option("--seed", tr.config.seed, "Seed");
  train->add_option("--init-scale", tr.config.init_scale, "Init range [0, s); default 1/sqrt(K)");
  train->add_option("--g-floor", tr.config.g_floor, "Lower clamp for the grey transform");
  train->add_flag("--ascent", tr.ascent, "Ascend the likelihood instead of descending");
  train->add_option("--out", tr.out, "Output parameter file")->required();

  // gradcheck
  gradcheck::Options gco;
  auto* gcheck = app.add_subcommand("gradcheck", "Finite-difference check of the gradients");
  gcheck->add_option("--trials", gco.trials, "Accepted parameter points");
  gcheck->add_option("--seed", gco.seed, "Seed");
  gcheck->add_option("--tol", gco.rel_tol, "Relative tolerance");

  // experiment
  ExperimentArgs ex;
  auto* exp = app.add_subcommand("experiment", "Seeded multi-trial comparison");
  exp->add_option("--data", ex.data, "Ratings file");
  exp->add_option("--format", ex.format, "movielens or delimited");
  exp->add_option("--synthetic", ex.synthetic, "Use a generated stand-in: ldos or ml1m");
  exp->add_option("--synthetic-seed", ex.synthetic_seed, "Seed for --synthetic and --subsample");
  exp->add_option("--subsample", ex.subsample, "Keep a seeded sample of this many ratings");
  exp->add_option("--delimiter", ex.delimiter, "Field separator for delimited files");
  exp->add_option("--user-col", ex.delimited.user_col, "0-based user column");
  exp->add_option("--item-col", ex.delimited.item_col, "0-based item column");
  exp->add_option("--rating-col", ex.delimited.rating_col, "0-based rating column");
  exp->add_flag("--skip-header", ex.delimited.skip_header, "Ignore the first line");
  exp->add_option("--rating-min", ex.rating_min, "Override the rating range minimum");
  exp->add_option("--rating-max", ex.rating_max, "Override the rating range maximum");
  exp->add_option("--algos", ex.algos, "Comma-separated subset of greyshot,mf,random");
  exp->add_option("--trials", ex.config.trials, "Trials per algorithm");
  exp->add_option("--seed", ex.config.base_seed, "Base seed; trial t uses seed + t");
  exp->add_option("--top-l", ex.config.top_l, "List length for the popularity profile");
  exp->add_option("--test-fraction", ex.config.test_fraction, "Held-out share");
  exp->add_option("--workers", ex.config.workers, "Concurrent trials");
  exp->add_option("--out-dir", ex.out_dir, "Directory for CSV/text outputs");
  exp->add_option("--gs-rank", ex.config.greyshot.rank, "GreyShot rank");
  exp->add_option("--gs-lr", ex.config.greyshot.learning_rate, "GreyShot learning rate");
  exp->add_option("--gs-iters", ex.config.greyshot.iterations, "GreyShot sampled steps");
  exp->add_option("--gs-init-scale", ex.config.greyshot.init_scale, "GreyShot init range");
  exp->add_option("--gs-g-floor", ex.config.greyshot.g_floor, "GreyShot transform clamp");
  exp->add_flag("--gs-ascent", ex.ascent, "GreyShot ascends the likelihood instead of descending");
  exp->add_option("--mf-rank", ex.config.mf.rank, "MF rank");
  exp->add_option("--mf-lr", ex.config.mf.learning_rate, "MF learning rate");
  exp->add_option("--mf-reg", ex.config.mf.regularization, "MF L2 regularization");
  exp->add_option("--mf-epochs", ex.config.mf.epochs, "MF epochs");
  exp->add_option("--greyshot-rescale", ex.greyshot_rescale, "none or minmax");
  exp->add_option("--mf-rescale", ex.mf_rescale, "none or minmax");
  exp->add_option("--random-rescale", ex.random_rescale, "none or minmax");

  // synth
  SynthArgs sy;
  auto* synth = app.add_subcommand("synth", "Write a generated same-shape stand-in dataset");
  synth->add_option("--preset", sy.preset, "ldos or ml1m");
  synth->add_option("--seed", sy.seed, "Seed");
  synth->add_option("--format", sy.format, "movielens or delimited");
  synth->add_option("--out", sy.out, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    kernels::set_active_backend(kernels::parse_backend(simd));
    if (fit->parsed()) return run_gm11(gm);
    if (train->parsed()) return run_train(tr);
    if (gcheck->parsed()) return run_gradcheck(gco);
    if (exp->parsed()) return run_experiment_cmd(ex);
    if (synth->parsed()) return run_synth(sy);
  } catch (const experiment::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kConfigError;
}
