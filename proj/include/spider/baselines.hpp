#pragma once

#include "spider/params.hpp"
#include "spider/trace.hpp"

namespace spider {

/// Reference optimizers sharing the problem/ledger interfaces. `target_eps`
/// enables the adaptive stop: the run halts once the running mean of squared
/// referee gradient norms (sampled every check_stride steps) drops to
/// target_eps^2, the uniform-output guarantee level. 0 disables it.
struct BaselineParams {
  double step = 0.1;          // constant step size, or the c in c/sqrt(k+1)
  bool sqrt_decay = false;    // eta_k = step / sqrt(k+1)
  long batch = 1;
  long epoch_length = 0;      // SVRG inner-loop length; 0 picks n
  long budget = 100000;       // iteration cap
  double target_eps = 0.0;
  long check_stride = 100;

  /// Documented SGD schedule: constant eta = c * eps^2 / (L sigma^2), which
  /// makes the eps^-4 cost-to-target scaling visible at desk scale.
  static BaselineParams sgd_for_eps(double eps, double L, double sigma, long budget,
                                    double c = 0.25);
};

RunTrace run_sgd(const FiniteSumProblem& problem, const BaselineParams& params,
                 std::uint64_t seed, const TraceOptions& opts = {},
                 const Vector* x0_override = nullptr);

/// Epoch-snapshot control-variate method; finite-sum only. The ledger charges
/// n per snapshot and 2 per inner sample.
RunTrace run_svrg(const FiniteSumProblem& problem, const BaselineParams& params,
                  std::uint64_t seed, const TraceOptions& opts = {},
                  const Vector* x0_override = nullptr);

/// Full-gradient descent with constant step.
RunTrace run_gd(const FiniteSumProblem& problem, const BaselineParams& params,
                const TraceOptions& opts = {}, const Vector* x0_override = nullptr);

/// Normalized full-gradient descent with constant displacement `step`.
RunTrace run_ngd(const FiniteSumProblem& problem, const BaselineParams& params,
                 const TraceOptions& opts = {}, const Vector* x0_override = nullptr);

}  // namespace spider
