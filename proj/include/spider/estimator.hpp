#pragma once

#include "spider/ledger.hpp"
#include "spider/problem.hpp"
#include "spider/rng.hpp"

namespace spider {

/// Running differential gradient estimate: v tracks grad f(x_prev), advanced
/// by sampled gradient differences and reset every q steps. Operations take a
/// state in and return a new state so a run can be replayed deterministically.
struct SpiderState {
  Vector v;
  Vector x_prev;
  long epoch_pos = 0;  // steps since the last reset, always < q
  long q = 0;          // epoch length this state was reset with
  long k = 0;          // global iteration counter
};

struct BatchSpec {
  bool full = false;
  long count = 0;
  static BatchSpec full_batch() { return {true, 0}; }
  static BatchSpec samples(long s1) { return {false, s1}; }
};

/// Multiset of component indices drawn with replacement.
struct SampleBatch {
  std::vector<int> indices;
  long size() const { return static_cast<long>(indices.size()); }
};

SampleBatch draw_batch(int n, long size, CounterRng& rng);

/// Epoch reset: exact full gradient (finite-sum) or an S1-sample average.
SpiderState spider_reset(const FiniteSumProblem& problem, const Vector& x, BatchSpec batch,
                         long q, CounterRng& rng, CostLedger& ledger);

/// Differential advance to x_new with an S2-sample batch; errors if the epoch
/// is exhausted (caller must reset first).
SpiderState spider_advance(const FiniteSumProblem& problem, const SpiderState& state,
                           const Vector& x_new, long S2, CounterRng& rng, CostLedger& ledger);

struct McErrorReport {
  double mean = 0.0;       // Monte-Carlo estimate of E ||v^k - grad f(x^k)||^2
  double std_error = 0.0;  // standard error of the estimate
  long trials = 0;
  bool displacement_ok = true;  // trajectory satisfied the per-step bound
  double max_displacement = 0.0;
  double displacement_bound = 0.0;
};

/// Replays the estimator over a fixed trajectory `trials` times and measures
/// the terminal squared error against the exact full gradient. trajectory[0]
/// is the reset point. Replays fan out over `workers` threads, each trial on
/// its own substream, so the result is identical for any worker count.
McErrorReport mc_error_second_moment(const FiniteSumProblem& problem,
                                     const std::vector<Vector>& trajectory, BatchSpec reset_batch,
                                     long S2, double displacement_bound, long trials,
                                     CounterRng rng, int workers = 1);

/// Exact E ||v^K - grad f(x^K)||^2 by exhaustive enumeration of every sample
/// path (S_sizes[t] draws with replacement at step t+1). The reset at
/// trajectory[0] is the exact full gradient. Throws if the path count would
/// exceed `path_cap`.
double enumerate_variance_oracle(const FiniteSumProblem& problem,
                                 const std::vector<Vector>& trajectory,
                                 const std::vector<long>& S_sizes,
                                 std::uint64_t path_cap = (1ull << 24));

/// Independent route for the same quantity: per-step difference variances
/// enumerated term by term and telescoped.
double telescoped_variance_sum(const FiniteSumProblem& problem,
                               const std::vector<Vector>& trajectory,
                               const std::vector<long>& S_sizes,
                               std::uint64_t path_cap = (1ull << 24));

}  // namespace spider
