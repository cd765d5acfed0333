// Apache License, Version 2.0, refer to LICENSE.txt

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "ibp/dataset.hpp"
#include "ibp/engine.hpp"
#include "ibp/evaluation.hpp"
#include "ibp/model.hpp"
#include "ibp/trace.hpp"

namespace {

struct GenerateOptions {
  int rows = 1000;
  double noise = 0.5;
  double feature_prob = 0.5;
  std::uint64_t seed = 0;
  std::string out;
};

struct RunOptions {
  std::string algo = "hybrid";
  int procs = 1;
  int iters = 1000;
  int subiters = 5;
  std::uint64_t seed = 0;
  std::string data;
  std::string trace;
  std::string scheduler = "concurrent";
  double alpha = 1.0;
  double sigma_x = 0.5;
  double sigma_a = 1.0;
  bool resample_alpha = true;
  bool resample_sigma_x = false;
  bool resample_sigma_a = false;
  double variance_step = 0.1;
  double alpha_prior_shape = 1.0;
  double alpha_prior_rate = 1.0;
  int eval_passes = 10;
  int init_k = 0;
  int pin_k = 0;
  std::string save_features;
};

struct EvalOptions {
  std::vector<std::string> traces;
  int last = 100;
};

int cmd_generate(const GenerateOptions& opt) {
  ibp::RngStream rng(opt.seed, 42);
  ibp::CambridgeData data = ibp::generate_cambridge(opt.rows, opt.noise, opt.feature_prob, rng);
  data.meta.seed = opt.seed;
  ibp::write_dataset_csv(opt.out, data.x);
  ibp::write_dataset_meta(ibp::meta_path_for(opt.out), data.meta);
  std::cout << "wrote " << data.meta.n_rows << "x" << data.meta.d << " dataset to "
            << opt.out << " (noise " << opt.noise << ", seed " << opt.seed << ")\n";
  return 0;
}

void write_run_meta(const std::string& trace_path, const RunOptions& opt) {
  std::ofstream out(ibp::meta_path_for(trace_path));
  if (!out) return;
  out << "algo=" << opt.algo << '\n'
      << "procs=" << opt.procs << '\n'
      << "iters=" << opt.iters << '\n'
      << "subiters=" << opt.subiters << '\n'
      << "seed=" << opt.seed << '\n'
      << "scheduler=" << opt.scheduler << '\n'
      << "dataset=" << opt.data << '\n'
      << "heldout_protocol=gibbs_impute_point_params\n"
      << "heldout_passes=" << opt.eval_passes << '\n'
      << "heldout_prior_terms=bernoulli_pi\n";
}

int cmd_run(const RunOptions& opt) {
  ibp::RunConfig config;
  config.algorithm = ibp::algorithm_from_name(opt.algo);
  config.processors = opt.procs;
  config.iterations = opt.iters;
  config.sub_iterations = opt.subiters;
  config.seed = opt.seed;
  config.scheduler = ibp::scheduler_from_name(opt.scheduler);
  config.heldout_gibbs_passes = opt.eval_passes;
  config.init_k = opt.init_k;
  config.pinned_k = opt.pin_k;
  config.hyper.alpha = opt.alpha;
  config.hyper.sigma_x = opt.sigma_x;
  config.hyper.sigma_a = opt.sigma_a;
  config.hyper.variance_step = opt.variance_step;
  config.hyper.alpha_prior = {opt.alpha_prior_shape, opt.alpha_prior_rate};
  config.hyper.resample = {opt.resample_alpha, opt.resample_sigma_x, opt.resample_sigma_a};
  if (config.algorithm == ibp::Algorithm::uncollapsed && opt.init_k == 0 && opt.pin_k == 0) {
    config.init_k = 8;
  }

  const Eigen::MatrixXd x = ibp::read_dataset_csv(opt.data);
  const auto [x_train, x_test] = ibp::split_train_test(x, 0.1);
  config.validate(static_cast<int>(x_train.rows()));

  ibp::TraceWriter writer(opt.trace);
  write_run_meta(opt.trace, opt);
  const ibp::RunResult result = ibp::run(x_train, x_test, config, &writer);

  if (!opt.save_features.empty()) {
    Eigen::MatrixXd features(0, x_train.cols());
    if (result.z.n_cols() > 0) {
      features = ibp::posterior_loadings(x_train, result.z, result.hyper.sigma_x,
                                         result.hyper.sigma_a)
                     .mean;
    }
    ibp::write_dataset_csv(opt.save_features, features);
  }
  const double final_heldout =
      result.trace.empty() ? 0.0 : result.trace.back().heldout_joint_ll;
  std::cout << "run finished: " << result.trace.size() << " iterations, final K+ "
            << result.z.n_cols() << ", final held-out joint ll " << final_heldout
            << ", trace " << opt.trace << "\n";
  return 0;
}

struct TraceSummary {
  std::string path;
  std::size_t records = 0;
  double wall_per_iter = 0.0;
  double mean_train = 0.0;
  double mean_heldout = 0.0;
  double final_heldout = 0.0;
  int final_k = 0;
  int modal_k = 0;
  int min_k = 0;
  int max_k = 0;
};

TraceSummary summarize(const std::string& path, int last) {
  const auto records = ibp::read_trace(path);
  if (records.empty()) {
    throw std::runtime_error("no records in '" + path + "'");
  }
  TraceSummary s;
  s.path = path;
  s.records = records.size();
  const std::size_t window = std::min<std::size_t>(last, records.size());
  const std::size_t begin = records.size() - window;
  std::map<int, int> k_counts;
  s.min_k = records[begin].k_plus;
  s.max_k = records[begin].k_plus;
  for (std::size_t i = begin; i < records.size(); ++i) {
    s.mean_train += records[i].train_joint_ll;
    s.mean_heldout += records[i].heldout_joint_ll;
    ++k_counts[records[i].k_plus];
    s.min_k = std::min(s.min_k, static_cast<int>(records[i].k_plus));
    s.max_k = std::max(s.max_k, static_cast<int>(records[i].k_plus));
  }
  s.mean_train /= window;
  s.mean_heldout /= window;
  s.final_heldout = records.back().heldout_joint_ll;
  s.final_k = records.back().k_plus;
  for (const auto& [k, c] : k_counts) {
    if (c > k_counts[s.modal_k]) s.modal_k = k;
  }
  if (records.size() > 1) {
    s.wall_per_iter = (records.back().wall_seconds - records.front().wall_seconds) /
                      static_cast<double>(records.size() - 1);
  } else {
    s.wall_per_iter = records.back().wall_seconds;
  }
  return s;
}

int cmd_eval(const EvalOptions& opt) {
  std::vector<TraceSummary> summaries;
  for (const auto& path : opt.traces) summaries.push_back(summarize(path, opt.last));
  std::printf("%-32s %8s %12s %14s %14s %14s %6s %7s %9s\n", "trace", "records",
              "wall_s/iter", "mean_train", "mean_heldout", "final_heldout", "K_end",
              "K_modal", "K_range");
  for (const auto& s : summaries) {
    char range[24];
    std::snprintf(range, sizeof(range), "%d..%d", s.min_k, s.max_k);
    std::printf("%-32s %8zu %12.6f %14.3f %14.3f %14.3f %6d %7d %9s\n", s.path.c_str(),
                s.records, s.wall_per_iter, s.mean_train, s.mean_heldout, s.final_heldout,
                s.final_k, s.modal_k, range);
  }
  std::printf("(means over the last %d records per trace)\n", opt.last);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MCMC inference for Indian Buffet Process latent feature models"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key=value config file");

  GenerateOptions gen;
  auto* generate = app.add_subcommand(
      "generate", "Generate the synthetic 6x6-image benchmark dataset");
  generate->add_option("--rows", gen.rows, "Number of observations")
      ->default_val(1000)
      ->check(CLI::PositiveNumber);
  generate->add_option("--noise", gen.noise, "Pixel noise standard deviation")
      ->default_val(0.5)
      ->check(CLI::NonNegativeNumber);
  generate->add_option("--feature-prob", gen.feature_prob,
                       "Per-row activation probability of each glyph")
      ->default_val(0.5);
  generate->add_option("--seed", gen.seed, "Random seed")
      ->default_val(0)
      ->envname("IBP_SEED");
  generate->add_option("--out", gen.out, "Output dataset CSV path")->required();

  RunOptions run;
  auto* runcmd = app.add_subcommand("run", "Run a sampler and write its trace");
  runcmd->add_option("--algo", run.algo, "Sampler: hybrid, collapsed, or uncollapsed")
      ->default_val("hybrid")
      ->check(CLI::IsMember({"hybrid", "collapsed", "uncollapsed"}));
  runcmd->add_option("--procs", run.procs, "Worker count (hybrid only)")
      ->default_val(1)
      ->check(CLI::PositiveNumber);
  runcmd->add_option("--iters", run.iters, "Global iterations")
      ->default_val(1000)
      ->check(CLI::NonNegativeNumber);
  runcmd->add_option("--subiters", run.subiters, "Sub-iterations per global step")
      ->default_val(5)
      ->check(CLI::NonNegativeNumber);
  runcmd->add_option("--seed", run.seed, "Random seed")
      ->default_val(0)
      ->envname("IBP_SEED");
  runcmd->add_option("--data", run.data, "Dataset CSV path")->required();
  runcmd->add_option("--trace", run.trace, "Output trace CSV path")->required();
  runcmd->add_option("--scheduler", run.scheduler, "Worker scheduler")
      ->default_val("concurrent")
      ->check(CLI::IsMember({"serial", "concurrent"}));
  runcmd->add_option("--alpha", run.alpha, "IBP concentration")->default_val(1.0);
  runcmd->add_option("--sigma-x", run.sigma_x, "Noise scale")->default_val(0.5);
  runcmd->add_option("--sigma-a", run.sigma_a, "Feature scale")->default_val(1.0);
  runcmd->add_option("--resample-alpha", run.resample_alpha, "Resample alpha at syncs")
      ->default_val(true);
  runcmd->add_option("--resample-sigma-x", run.resample_sigma_x, "Resample sigma_x")
      ->default_val(false);
  runcmd->add_option("--resample-sigma-a", run.resample_sigma_a, "Resample sigma_a")
      ->default_val(false);
  runcmd->add_option("--variance-step", run.variance_step,
                     "Random-walk step for variance moves")
      ->default_val(0.1);
  runcmd->add_option("--alpha-prior-shape", run.alpha_prior_shape, "Gamma prior shape")
      ->default_val(1.0);
  runcmd->add_option("--alpha-prior-rate", run.alpha_prior_rate, "Gamma prior rate")
      ->default_val(1.0);
  runcmd->add_option("--eval-passes", run.eval_passes,
                     "Gibbs passes when imputing held-out assignments")
      ->default_val(10)
      ->check(CLI::NonNegativeNumber);
  runcmd->add_option("--init-k", run.init_k, "Initial feature count")
      ->default_val(0)
      ->check(CLI::NonNegativeNumber);
  runcmd->add_option("--pin-k", run.pin_k,
                     "Pin K to this value (finite model, births disabled)")
      ->default_val(0)
      ->check(CLI::NonNegativeNumber);
  runcmd->add_option("--save-features", run.save_features,
                     "Write posterior-mean loadings to this CSV");

  EvalOptions eval;
  auto* evalcmd = app.add_subcommand("eval", "Summarize one or more run traces");
  evalcmd->add_option("traces", eval.traces, "Trace CSV paths")->required();
  evalcmd->add_option("--last", eval.last, "Window for trailing means")
      ->default_val(100)
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(generate)) return cmd_generate(gen);
    if (app.got_subcommand(runcmd)) return cmd_run(run);
    return cmd_eval(eval);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
