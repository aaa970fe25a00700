#pragma once

#include <functional>

#include "spider/baselines.hpp"
#include "spider/config.hpp"
#include "spider/sfo.hpp"
#include "spider/ssp.hpp"
#include "spider/szo.hpp"

namespace spider {

inline constexpr const char* kSpiderVersion = "spider 0.1.0";

/// Validated experiment description: problem spec, algorithm list with
/// per-algorithm parameters (kept in the raw config), a strictly decreasing
/// eps grid, seed count and referee/counting toggles.
struct ExperimentConfig {
  ConfigMap raw;
  std::string problem_name;
  std::vector<std::string> algorithms;
  std::vector<double> eps_grid;
  long seed_count = 1;
  std::uint64_t seed_base = 0;
  std::string out_dir = "results";
  bool paper_convention = true;
  TraceOptions trace;
  int workers = 1;

  static ExperimentConfig validate(const ConfigMap& cfg);
};

std::shared_ptr<FiniteSumProblem> build_problem(const ConfigMap& cfg);

/// One summary line per (algorithm, eps) cell.
struct SummaryRow {
  std::string algorithm;
  double eps = 0.0;
  double mean_cost_to_target = 0.0;
  double mean_final_grad_norm = 0.0;
  double stop_frequency = 0.0;
};

/// Runs one (algorithm, eps, seed) cell from the config.
RunTrace run_cell(const FiniteSumProblem& problem, const ExperimentConfig& config,
                  const std::string& algorithm, double eps, std::uint64_t seed);

/// Runs the full sweep, writing one trace CSV per cell plus summary.csv,
/// manifest.txt and timings.txt under out_dir. Returns the summary rows.
std::vector<SummaryRow> run_experiment(const ExperimentConfig& config);

void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path);
std::vector<SummaryRow> load_summary_csv(const std::string& path);

struct SlopeFit {
  double slope = 0.0;
  double r2 = 0.0;
  int points = 0;
};

/// Least-squares slope of log(mean cost) against log(1/eps) for one
/// algorithm; needs >= 3 eps points and a non-degenerate cost series.
SlopeFit scaling_slope(const std::vector<SummaryRow>& summary, const std::string& algorithm);

using AlgoRunner = std::function<RunTrace(std::uint64_t seed)>;

/// Restart wrapper: reruns until the gradient-norm verifier accepts
/// |grad f(x_out)| <= 15 eps (exact in finite-sum mode, sampled online) or
/// ceil(log2(1/p)) attempts are exhausted (status Failed).
RunTrace verify_and_restart(const FiniteSumProblem& problem, const AlgoRunner& runner,
                            double eps, Mode mode, double sigma, double p, std::uint64_t seed);

/// FNV-1a hash of a byte string, used for the config manifest.
std::string fnv1a_hex(const std::string& bytes);

/// One-sided binomial check: true when `successes` out of `trials` is
/// statistically consistent with a success rate >= rate at level alpha.
bool binomial_meets_rate(long successes, long trials, double rate, double alpha = 0.05);

}  // namespace spider
