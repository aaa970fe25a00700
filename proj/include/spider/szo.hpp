#pragma once

#include "spider/estimator.hpp"
#include "spider/params.hpp"
#include "spider/trace.hpp"

namespace spider {

/// Coordinate-wise forward-difference reset. Full mode uses exact f values
/// (2*d*n IZO); sampled mode shares one S1' component batch across all
/// coordinates (2*d*S1' IZO).
SpiderState coord_reset(const ZerothOrderView& problem, const Vector& x, double mu,
                        long S1_per_coord, bool full, long q, CounterRng& rng,
                        CostLedger& ledger);

/// Differential advance from S2 sampled (component, Gaussian direction)
/// pairs; each pair shares its direction across the two evaluation points.
/// Charges 4*S2 IZO.
SpiderState gaussian_pair_advance(const ZerothOrderView& problem, const SpiderState& state,
                                  const Vector& x_new, double mu, long S2, CounterRng& rng,
                                  CostLedger& ledger);

/// Zeroth-order variance-reduced loop; touches the problem only through a
/// value-only view, runs K clipped steps and returns a uniform iterate.
RunTrace run_szo(const FiniteSumProblem& problem, const SzoParams& params, std::uint64_t seed,
                 const TraceOptions& opts = {}, const Vector* x0_override = nullptr);

struct SmoothedGradEstimate {
  Vector mean;
  double norm_std_error = 0.0;  // sqrt(sum_j var_j / trials)
  long trials = 0;
};

/// Monte-Carlo estimate of the Gaussian-smoothed gradient via the two-point
/// form over sampled (i, u) pairs.
SmoothedGradEstimate smoothed_grad_referee(const FiniteSumProblem& problem, const Vector& x,
                                           double mu, long trials, CounterRng rng);

}  // namespace spider
