#include "spider/estimator.hpp"

#include <cmath>
#include <thread>

namespace spider {

SampleBatch draw_batch(int n, long size, CounterRng& rng) {
  SampleBatch batch;
  batch.indices.reserve(size);
  for (long s = 0; s < size; ++s)
    batch.indices.push_back(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n))));
  return batch;
}

SpiderState spider_reset(const FiniteSumProblem& problem, const Vector& x, BatchSpec batch,
                         long q, CounterRng& rng, CostLedger& ledger) {
  problem.check_dim(x);
  SpiderState state;
  state.x_prev = x;
  state.epoch_pos = 0;
  state.q = q;
  if (batch.full) {
    state.v = problem.full_grad(x);
    ledger.charge_reset(static_cast<std::uint64_t>(problem.n()));
  } else {
    if (batch.count < 1) throw std::invalid_argument("spider_reset: S1 must be >= 1");
    const SampleBatch s1 = draw_batch(problem.n(), batch.count, rng);
    Vector acc = Vector::Zero(problem.d());
    for (int idx : s1.indices) acc += problem.grad(idx, x);
    state.v = acc / static_cast<double>(s1.size());
    ledger.charge_reset(static_cast<std::uint64_t>(batch.count));
  }
  return state;
}

SpiderState spider_advance(const FiniteSumProblem& problem, const SpiderState& state,
                           const Vector& x_new, long S2, CounterRng& rng, CostLedger& ledger) {
  problem.check_dim(x_new);
  if (S2 < 1) throw std::invalid_argument("spider_advance: S2 must be >= 1");
  if (state.epoch_pos + 1 >= state.q)
    throw std::logic_error("spider_advance: epoch exhausted, reset required");
  const SampleBatch s2 = draw_batch(problem.n(), S2, rng);
  Vector diff = Vector::Zero(problem.d());
  for (int idx : s2.indices)
    diff += problem.grad(idx, x_new) - problem.grad(idx, state.x_prev);
  SpiderState next;
  next.v = state.v + diff / static_cast<double>(S2);
  next.x_prev = x_new;
  next.epoch_pos = state.epoch_pos + 1;
  next.q = state.q;
  next.k = state.k + 1;
  ledger.charge_advance(static_cast<std::uint64_t>(S2));
  return next;
}

McErrorReport mc_error_second_moment(const FiniteSumProblem& problem,
                                     const std::vector<Vector>& trajectory, BatchSpec reset_batch,
                                     long S2, double displacement_bound, long trials,
                                     CounterRng rng, int workers) {
  if (trajectory.empty()) throw std::invalid_argument("mc_error: empty trajectory");
  if (trials < 1) throw std::invalid_argument("mc_error: trials must be >= 1");

  McErrorReport report;
  report.trials = trials;
  report.displacement_bound = displacement_bound;
  for (size_t t = 1; t < trajectory.size(); ++t) {
    const double step = (trajectory[t] - trajectory[t - 1]).norm();
    report.max_displacement = std::max(report.max_displacement, step);
  }
  report.displacement_ok = report.max_displacement <= displacement_bound * (1.0 + 1e-12);

  const Vector target = problem.full_grad(trajectory.back());
  const long K = static_cast<long>(trajectory.size()) - 1;

  std::vector<double> errors(trials, 0.0);
  auto run_range = [&](long lo, long hi) {
    for (long t = lo; t < hi; ++t) {
      CounterRng stream = rng.substream(static_cast<std::uint64_t>(t));
      CostLedger scratch;
      SpiderState st = spider_reset(problem, trajectory[0], reset_batch, K + 2, stream, scratch);
      for (long s = 1; s <= K; ++s)
        st = spider_advance(problem, st, trajectory[s], S2, stream, scratch);
      errors[t] = (st.v - target).squaredNorm();
    }
  };

  if (workers <= 1) {
    run_range(0, trials);
  } else {
    std::vector<std::thread> pool;
    const long chunk = (trials + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const long lo = w * chunk;
      const long hi = std::min<long>(trials, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(run_range, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  double sum = 0.0, sumsq = 0.0;
  for (double e : errors) {
    sum += e;
    sumsq += e * e;
  }
  report.mean = sum / trials;
  const double var = std::max(0.0, sumsq / trials - report.mean * report.mean);
  report.std_error = std::sqrt(var / trials);
  return report;
}

namespace {

std::uint64_t checked_path_count(int n, const std::vector<long>& S_sizes, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (long s : S_sizes) {
    for (long rep = 0; rep < s; ++rep) {
      total *= static_cast<std::uint64_t>(n);
      if (total > cap)
        throw std::runtime_error("enumeration cap exceeded: too many sample paths");
    }
  }
  return total;
}

// Per-component gradient differences for one step of the trajectory.
std::vector<Vector> step_diffs(const FiniteSumProblem& problem, const Vector& x_new,
                               const Vector& x_old) {
  std::vector<Vector> diffs(problem.n());
  for (int i = 0; i < problem.n(); ++i)
    diffs[i] = problem.grad(i, x_new) - problem.grad(i, x_old);
  return diffs;
}

// Enumerates all ordered tuples in [n]^S, invoking fn with the tuple mean.
template <typename Fn>
void for_each_tuple_mean(const std::vector<Vector>& diffs, long S, Fn&& fn) {
  const int n = static_cast<int>(diffs.size());
  std::vector<int> tuple(S, 0);
  for (;;) {
    Vector mean = Vector::Zero(diffs[0].size());
    for (long s = 0; s < S; ++s) mean += diffs[tuple[s]];
    fn(mean / static_cast<double>(S));
    long pos = S - 1;
    while (pos >= 0 && ++tuple[pos] == n) tuple[pos--] = 0;
    if (pos < 0) break;
  }
}

// Recursive product-space walk carrying the running estimate v.
void enumerate_paths(const std::vector<std::vector<Vector>>& diffs_by_step,
                     const std::vector<long>& S_sizes, size_t step, const Vector& v,
                     const Vector& target, double& err_sum, std::uint64_t& leaves) {
  if (step == diffs_by_step.size()) {
    err_sum += (v - target).squaredNorm();
    ++leaves;
    return;
  }
  for_each_tuple_mean(diffs_by_step[step], S_sizes[step], [&](const Vector& mean_diff) {
    enumerate_paths(diffs_by_step, S_sizes, step + 1, Vector(v + mean_diff), target, err_sum,
                    leaves);
  });
}

}  // namespace

double enumerate_variance_oracle(const FiniteSumProblem& problem,
                                 const std::vector<Vector>& trajectory,
                                 const std::vector<long>& S_sizes, std::uint64_t path_cap) {
  if (trajectory.size() < 1) throw std::invalid_argument("enumerate: empty trajectory");
  if (S_sizes.size() != trajectory.size() - 1)
    throw std::invalid_argument("enumerate: need one batch size per step");
  checked_path_count(problem.n(), S_sizes, path_cap);

  const Vector v0 = problem.full_grad(trajectory[0]);  // exact reset
  const Vector target = problem.full_grad(trajectory.back());
  std::vector<std::vector<Vector>> diffs_by_step;
  for (size_t t = 1; t < trajectory.size(); ++t)
    diffs_by_step.push_back(step_diffs(problem, trajectory[t], trajectory[t - 1]));
  double err_sum = 0.0;
  std::uint64_t leaves = 0;
  enumerate_paths(diffs_by_step, S_sizes, 0, v0, target, err_sum, leaves);
  return err_sum / static_cast<double>(leaves);
}

double telescoped_variance_sum(const FiniteSumProblem& problem,
                               const std::vector<Vector>& trajectory,
                               const std::vector<long>& S_sizes, std::uint64_t path_cap) {
  if (trajectory.size() < 1) throw std::invalid_argument("telescope: empty trajectory");
  if (S_sizes.size() != trajectory.size() - 1)
    throw std::invalid_argument("telescope: need one batch size per step");
  checked_path_count(problem.n(), S_sizes, path_cap);

  double total = 0.0;  // exact reset contributes zero initial error
  for (size_t t = 1; t < trajectory.size(); ++t) {
    const Vector exact = problem.full_grad(trajectory[t]) - problem.full_grad(trajectory[t - 1]);
    const auto diffs = step_diffs(problem, trajectory[t], trajectory[t - 1]);
    double acc = 0.0;
    std::uint64_t count = 0;
    for_each_tuple_mean(diffs, S_sizes[t - 1], [&](const Vector& mean_diff) {
      acc += (mean_diff - exact).squaredNorm();
      ++count;
    });
    total += acc / static_cast<double>(count);
  }
  return total;
}

}  // namespace spider
