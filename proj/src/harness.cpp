#include "spider/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "spider/chain.hpp"
#include "spider/suites.hpp"

namespace spider {

namespace fs = std::filesystem;

ExperimentConfig ExperimentConfig::validate(const ConfigMap& cfg) {
  ExperimentConfig ec;
  ec.raw = cfg;
  ec.problem_name = cfg.get_string("problem.name");
  ec.algorithms = cfg.get_string_list("algos");
  ec.eps_grid = cfg.get_double_list("eps");
  for (size_t i = 0; i < ec.eps_grid.size(); ++i) {
    if (ec.eps_grid[i] <= 0.0) throw ConfigError("eps", "grid entries must be positive");
    if (i > 0 && ec.eps_grid[i] >= ec.eps_grid[i - 1])
      throw ConfigError("eps", "grid must be strictly decreasing");
  }
  ec.seed_count = cfg.get_long("seeds", 1);
  if (ec.seed_count < 1) throw ConfigError("seeds", "seed count must be >= 1");
  ec.seed_base = static_cast<std::uint64_t>(cfg.get_long("seed_base", 1));
  if (const char* env = std::getenv("SPIDER_SEED"))
    ec.seed_base = static_cast<std::uint64_t>(std::stoull(env));
  ec.out_dir = cfg.get_string("out", "results");
  const std::string conv = cfg.get_string("counting", "paper");
  if (conv == "paper")
    ec.paper_convention = true;
  else if (conv == "charged")
    ec.paper_convention = false;
  else
    throw ConfigError("counting", "expected paper or charged");
  ec.trace.record_f = cfg.get_bool("trace.record_f", true);
  ec.trace.grad_referee = cfg.get_bool("referee.grad_norm", false);
  ec.trace.stride = cfg.get_long("trace.stride", 1);
  ec.workers = static_cast<int>(cfg.get_long("workers", 1));
  if (ec.workers < 1) throw ConfigError("workers", "must be >= 1");
  return ec;
}

std::shared_ptr<FiniteSumProblem> build_problem(const ConfigMap& cfg) {
  const std::string name = cfg.get_string("problem.name");
  const std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_long("problem.seed", 0));
  if (name == "hard-instance") {
    HardInstanceSpec spec;
    spec.K = static_cast<int>(cfg.get_long("problem.K", 4));
    spec.n = static_cast<int>(cfg.get_long("problem.n", 2));
    spec.d = static_cast<int>(cfg.get_long("problem.d", 64));
    spec.eps = cfg.get_double("problem.eps", 0.1);
    spec.L = cfg.get_double("problem.L", 1.0);
    spec.R = cfg.get_double("problem.R", 0.0);
    spec.seed = seed;
    return hard_instance(spec);
  }
  SuiteOptions opts;
  opts.uniform_curvature = cfg.get_bool("problem.uniform", false);
  opts.sigma_target = cfg.get_double("problem.sigma_target", 0.0);
  opts.center_norm = cfg.get_double("problem.center_norm", 1.0);
  opts.lambda = cfg.get_double("problem.lambda", 0.1);
  opts.quartic_b = cfg.get_double("problem.quartic_b", 0.15);
  opts.negative_eig = cfg.get_double("problem.negative_eig", -1.2);
  opts.hessian_spread = cfg.get_double("problem.hessian_spread", 0.2);
  const int d = static_cast<int>(cfg.get_long("problem.d"));
  const int n = static_cast<int>(cfg.get_long("problem.n"));
  try {
    return make_suite(name, d, n, seed, opts);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("problem.name", e.what());
  }
}

namespace {

Mode mode_from_string(const std::string& s, const std::string& field) {
  if (s == "online") return Mode::Online;
  if (s == "finite-sum") return Mode::FiniteSum;
  throw ConfigError(field, "expected online or finite-sum");
}

ProblemConstants constants_for(const FiniteSumProblem& problem, const ConfigMap& cfg) {
  const Vector x0 = Vector::Zero(problem.d());
  ProblemConstants c = ProblemConstants::from_problem(problem, x0);
  if (cfg.has("constants.delta"))
    c.Delta = cfg.get_double("constants.delta");
  else if (!problem.meta().f_star) {
    if (!cfg.has("constants.f_lower"))
      throw ConfigError("constants.delta",
                        "problem has no known f*; set constants.delta or constants.f_lower");
    c.Delta = problem.full_value(x0) - cfg.get_double("constants.f_lower");
  }
  if (cfg.has("constants.sigma")) c.sigma = cfg.get_double("constants.sigma");
  if (cfg.has("constants.L")) c.L = cfg.get_double("constants.L");
  if (cfg.has("constants.rho")) c.rho = cfg.get_double("constants.rho");
  return c;
}

}  // namespace

RunTrace run_cell(const FiniteSumProblem& problem, const ExperimentConfig& config,
                  const std::string& algorithm, double eps, std::uint64_t seed) {
  const ConfigMap& cfg = config.raw;
  const ProblemConstants constants = constants_for(problem, cfg);
  TraceOptions opts = config.trace;

  if (algorithm == "spider-sfo") {
    const Mode mode = mode_from_string(cfg.get_string("spider-sfo.mode", "finite-sum"),
                                       "spider-sfo.mode");
    const double n0 = cfg.get_double("spider-sfo.n0", 1.0);
    const double p_fail = cfg.get_double("spider-sfo.p-fail", 0.1);
    const long option = cfg.get_long("spider-sfo.option", 2);
    AlgoParams params = derive_params(eps, constants, n0, mode, p_fail);
    if (cfg.has("spider-sfo.eps-tilde"))
      params.eps_tilde = cfg.get_double("spider-sfo.eps-tilde");
    return run_sfo(problem, params,
                   option == 1 ? StepOption::NormalizedStop : StepOption::ClippedAverage, seed,
                   opts);
  }
  if (algorithm == "spider-sfo-plus") {
    const Mode mode = mode_from_string(cfg.get_string("spider-sfo-plus.mode", "finite-sum"),
                                       "spider-sfo-plus.mode");
    const double n0 = cfg.get_double("spider-sfo-plus.n0", 1.0);
    std::optional<double> delta;
    if (cfg.has("spider-sfo-plus.delta")) delta = cfg.get_double("spider-sfo-plus.delta");
    const std::string backend = cfg.get_string("spider-sfo-plus.nc-backend", "oja");
    if (backend != "oja" && backend != "exact")
      throw ConfigError("spider-sfo-plus.nc-backend", "expected oja or exact");
    SspParams sp = derive_params_ssp(eps, constants, n0, mode, delta);
    if (cfg.has("spider-sfo-plus.eps-tilde"))
      sp.eps_tilde = cfg.get_double("spider-sfo-plus.eps-tilde");
    return run_sfo_plus(problem, sp, seed, opts, nullptr,
                        backend == "oja" ? NcsBackend::Oja : NcsBackend::Exact);
  }
  if (algorithm == "spider-szo") {
    const Mode mode = mode_from_string(cfg.get_string("spider-szo.mode", "finite-sum"),
                                       "spider-szo.mode");
    const double n0 = cfg.get_double("spider-szo.n0", 1.0);
    SzoParams zp = derive_params_szo(eps, constants, n0, mode);
    if (cfg.has("spider-szo.mu-override")) zp.mu = cfg.get_double("spider-szo.mu-override");
    return run_szo(problem, zp, seed, opts);
  }
  if (algorithm == "sgd") {
    const double sigma = constants.sigma.value_or(1.0);
    BaselineParams bp = BaselineParams::sgd_for_eps(eps, constants.L, sigma,
                                                    cfg.get_long("sgd.budget", 100000000),
                                                    cfg.get_double("sgd.step-c", 0.25));
    bp.batch = cfg.get_long("sgd.batch", 1);
    bp.check_stride = cfg.get_long("sgd.check-stride", 500);
    return run_sgd(problem, bp, seed, opts);
  }
  if (algorithm == "svrg") {
    BaselineParams bp;
    bp.step = cfg.get_double("svrg.step", 0.1 / constants.L);
    bp.epoch_length = cfg.get_long("svrg.epoch", 0);
    bp.budget = cfg.get_long("svrg.budget", 1000000);
    bp.target_eps = eps;
    bp.check_stride = cfg.get_long("svrg.check-stride", 100);
    return run_svrg(problem, bp, seed, opts);
  }
  if (algorithm == "gd") {
    BaselineParams bp;
    bp.step = cfg.get_double("gd.step", 1.0 / constants.L);
    bp.budget = cfg.get_long("gd.budget", 100000);
    bp.target_eps = eps;
    return run_gd(problem, bp, opts);
  }
  if (algorithm == "ngd") {
    BaselineParams bp;
    bp.step = cfg.get_double("ngd.step", eps / constants.L);
    bp.budget = cfg.get_long("ngd.budget", 100000);
    bp.target_eps = eps;
    return run_ngd(problem, bp, opts);
  }
  throw ConfigError("algos", "unknown algorithm: " + algorithm);
}

namespace {

std::string eps_tag(double eps) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", eps);
  std::string s(buf);
  for (char& c : s)
    if (c == '.') c = 'p';
  return s;
}

double cell_cost(const RunTrace& trace, bool paper) { return trace.ledger.total(paper); }

}  // namespace

std::vector<SummaryRow> run_experiment(const ExperimentConfig& config) {
  fs::create_directories(config.out_dir);
  const auto problem = build_problem(config.raw);

  struct Cell {
    std::string algo;
    double eps;
    std::uint64_t seed;
    std::string path;
  };
  std::vector<Cell> cells;
  for (const std::string& algo : config.algorithms)
    for (double eps : config.eps_grid)
      for (long s = 0; s < config.seed_count; ++s) {
        const std::uint64_t seed = config.seed_base + static_cast<std::uint64_t>(s);
        cells.push_back({algo, eps,
                         seed,
                         config.out_dir + "/" + algo + "_eps" + eps_tag(eps) + "_seed" +
                             std::to_string(seed) + ".csv"});
      }

  std::vector<RunTrace> traces(cells.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t idx = next.fetch_add(1);
      if (idx >= cells.size()) return;
      const Cell& cell = cells[idx];
      traces[idx] = run_cell(*problem, config, cell.algo, cell.eps, cell.seed);
      write_trace_csv(traces[idx], cell.path, config.paper_convention);
    }
  };
  if (config.workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < config.workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Aggregate per (algorithm, eps) in config order.
  std::vector<SummaryRow> summary;
  for (const std::string& algo : config.algorithms)
    for (double eps : config.eps_grid) {
      SummaryRow row;
      row.algorithm = algo;
      row.eps = eps;
      long count = 0, stopped = 0;
      for (size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].algo != algo || cells[i].eps != eps) continue;
        ++count;
        row.mean_cost_to_target += cell_cost(traces[i], config.paper_convention);
        row.mean_final_grad_norm += traces[i].final_grad_norm;
        if (traces[i].status == RunStatus::Stopped) ++stopped;
      }
      row.mean_cost_to_target /= count;
      row.mean_final_grad_norm /= count;
      row.stop_frequency = static_cast<double>(stopped) / count;
      summary.push_back(row);
    }

  write_summary_csv(summary, config.out_dir + "/summary.csv");

  std::ofstream manifest(config.out_dir + "/manifest.txt");
  manifest << "config_hash=" << fnv1a_hex(config.raw.source_text()) << "\n"
           << "code_version=" << kSpiderVersion << "\n"
           << "cells=" << cells.size() << "\n";

  std::ofstream timings(config.out_dir + "/timings.txt");
  for (size_t i = 0; i < cells.size(); ++i)
    timings << cells[i].path << " " << traces[i].wall_seconds << "\n";

  return summary;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open summary file: " + path);
  out << "algorithm,eps,mean_cost_to_target,mean_final_grad_norm,stop_frequency\n";
  for (const SummaryRow& r : rows)
    out << r.algorithm << ',' << format_double(r.eps) << ','
        << format_double(r.mean_cost_to_target) << ',' << format_double(r.mean_final_grad_norm)
        << ',' << format_double(r.stop_frequency) << '\n';
}

std::vector<SummaryRow> load_summary_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open summary file: " + path);
  std::vector<SummaryRow> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    SummaryRow r;
    std::string field;
    std::getline(ss, r.algorithm, ',');
    std::getline(ss, field, ',');
    r.eps = std::stod(field);
    std::getline(ss, field, ',');
    r.mean_cost_to_target = std::stod(field);
    std::getline(ss, field, ',');
    r.mean_final_grad_norm = std::stod(field);
    std::getline(ss, field, ',');
    r.stop_frequency = std::stod(field);
    rows.push_back(r);
  }
  return rows;
}

SlopeFit scaling_slope(const std::vector<SummaryRow>& summary, const std::string& algorithm) {
  std::vector<double> xs, ys;
  for (const SummaryRow& r : summary) {
    if (r.algorithm != algorithm) continue;
    if (r.mean_cost_to_target <= 0.0)
      throw std::invalid_argument("scaling_slope: non-positive cost for " + algorithm);
    xs.push_back(std::log(1.0 / r.eps));
    ys.push_back(std::log(r.mean_cost_to_target));
  }
  if (xs.size() < 3)
    throw std::invalid_argument("scaling_slope: need at least 3 eps points for " + algorithm);
  const int n = static_cast<int>(xs.size());
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("scaling_slope: degenerate eps grid");
  if (syy == 0.0) throw std::invalid_argument("scaling_slope: constant cost series");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.r2 = (sxy * sxy) / (sxx * syy);
  fit.points = n;
  return fit;
}

RunTrace verify_and_restart(const FiniteSumProblem& problem, const AlgoRunner& runner,
                            double eps, Mode mode, double sigma, double p, std::uint64_t seed) {
  const int attempts_budget = static_cast<int>(std::ceil(std::log2(1.0 / p)));
  CounterRng rng(seed ^ 0x5e11afe11ull);
  RunTrace last;
  for (int attempt = 1; attempt <= attempts_budget; ++attempt) {
    RunTrace trace = runner(seed + static_cast<std::uint64_t>(attempt - 1));
    double grad_norm;
    if (mode == Mode::FiniteSum) {
      grad_norm = problem.full_grad(trace.x_out).norm();
      trace.ledger.charge_grad(static_cast<std::uint64_t>(problem.n()));
    } else {
      const long m = std::max<long>(1, static_cast<long>(std::ceil(
                                           8.0 * sigma * sigma / (eps * eps))));
      Vector acc = Vector::Zero(problem.d());
      for (long s = 0; s < m; ++s) {
        const int i = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(problem.n())));
        acc += problem.grad(i, trace.x_out);
      }
      grad_norm = (acc / static_cast<double>(m)).norm();
      trace.ledger.charge_grad(static_cast<std::uint64_t>(m));
    }
    trace.attempts = attempt;
    if (grad_norm <= 15.0 * eps) return trace;
    last = std::move(trace);
  }
  last.status = RunStatus::Failed;
  last.attempts = attempts_budget;
  return last;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool binomial_meets_rate(long successes, long trials, double rate, double alpha) {
  // P(Bin(trials, rate) <= successes) > alpha means we cannot reject a true
  // success rate of `rate` at the given level.
  if (successes >= trials) return true;
  double log_pmf = trials * std::log1p(-rate);  // P(X = 0)
  double cdf = std::exp(log_pmf);
  for (long x = 1; x <= successes; ++x) {
    log_pmf += std::log(static_cast<double>(trials - x + 1)) - std::log(static_cast<double>(x)) +
               std::log(rate) - std::log1p(-rate);
    cdf += std::exp(log_pmf);
  }
  return cdf > alpha;
}

}  // namespace spider
