#include <CLI11.hpp>
#include <cstdio>

#include "spider/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRun = 3;

int cmd_run(const std::string& config_path, int workers, const std::string& out_dir) {
  spider::ExperimentConfig config;
  try {
    config = spider::ExperimentConfig::validate(spider::ConfigMap::parse_file(config_path));
    if (workers > 0) config.workers = workers;
    if (!out_dir.empty()) config.out_dir = out_dir;
  } catch (const spider::ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitConfig;
  }
  try {
    const auto summary = spider::run_experiment(config);
    for (const auto& row : summary)
      std::printf("%-16s eps=%-10g mean_cost=%-14.6g final_grad=%-12.6g stop_freq=%.3f\n",
                  row.algorithm.c_str(), row.eps, row.mean_cost_to_target,
                  row.mean_final_grad_norm, row.stop_frequency);
    std::printf("wrote %s/summary.csv\n", config.out_dir.c_str());
    return kExitOk;
  } catch (const spider::ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "run failure: %s\n", e.what());
    return kExitRun;
  }
}

int cmd_slope(const std::string& summary_path, const std::string& algo) {
  try {
    const auto summary = spider::load_summary_csv(summary_path);
    const auto fit = spider::scaling_slope(summary, algo);
    std::printf("%s: slope=%.4f r2=%.4f points=%d\n", algo.c_str(), fit.slope, fit.r2,
                fit.points);
    return kExitOk;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "slope failure: %s\n", e.what());
    return kExitRun;
  }
}

int cmd_verify(const std::string& config_path, double p) {
  spider::ExperimentConfig config;
  try {
    config = spider::ExperimentConfig::validate(spider::ConfigMap::parse_file(config_path));
  } catch (const spider::ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitConfig;
  }
  try {
    const auto problem = spider::build_problem(config.raw);
    const std::string algo = config.algorithms.at(0);
    const double eps = config.eps_grid.at(0);
    const auto mode_str = config.raw.get_string(algo + ".mode", "finite-sum");
    const spider::Mode mode =
        mode_str == "online" ? spider::Mode::Online : spider::Mode::FiniteSum;
    const double sigma = problem->meta().sigma.value_or(1.0);
    auto runner = [&](std::uint64_t seed) {
      return spider::run_cell(*problem, config, algo, eps, seed);
    };
    const auto trace =
        spider::verify_and_restart(*problem, runner, eps, mode, sigma, p, config.seed_base);
    std::printf("status=%s attempts=%d final_grad=%.6g\n", spider::to_string(trace.status),
                trace.attempts, trace.final_grad_norm);
    return trace.status == spider::RunStatus::Failed ? kExitRun : kExitOk;
  } catch (const spider::ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "verify failure: %s\n", e.what());
    return kExitRun;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variance-reduced stochastic optimization harness"};
  app.require_subcommand(1);

  std::string config_path, out_dir, summary_path, algo;
  int workers = 0;
  double p_fail = 0.05;

  auto* run = app.add_subcommand("run", "Run the experiment sweep from a config file");
  run->add_option("--config", config_path, "config file path")->required();
  run->add_option("--workers", workers, "concurrent cells");
  run->add_option("--out", out_dir, "output directory override");

  auto* slope = app.add_subcommand("slope", "Fit log-log cost scaling from a summary CSV");
  slope->add_option("--summary", summary_path, "summary.csv path")->required();
  slope->add_option("--algo", algo, "algorithm name")->required();

  auto* verify = app.add_subcommand("verify", "Run with the restart-and-verify wrapper");
  verify->add_option("--config", config_path, "config file path")->required();
  verify->add_option("--p", p_fail, "target failure probability");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(config_path, workers, out_dir);
  if (slope->parsed()) return cmd_slope(summary_path, algo);
  if (verify->parsed()) return cmd_verify(config_path, p_fail);
  return kExitConfig;
}
