#pragma once

#include <optional>

#include "spider/estimator.hpp"
#include "spider/params.hpp"
#include "spider/trace.hpp"

namespace spider {

/// Negative-curvature search outcome: either no direction (which certifies
/// lambda_min >= -delta with probability >= 1-p, for the tolerance delta the
/// search was called with) or a unit direction with curvature <= -delta/2.
struct NcsOutcome {
  bool found = false;
  Vector w1;
  double rayleigh_estimate = 0.0;
  static NcsOutcome bot() { return {}; }
};

enum class NcsBackend { Oja, Exact };

/// NC-search at x with tolerance delta; the second-order loop calls it at
/// 2 delta. The oja backend runs a streaming power iteration on stochastic
/// Hessian-vector surrogates (grad_i(x + a w) - grad_i(x)) / a, using only
/// gradient accesses, then verifies the candidate by an averaged Rayleigh
/// estimate. The exact backend is a deterministic dense eigensolver.
NcsOutcome nc_search(const FiniteSumProblem& problem, const Vector& x, double delta, double p,
                     CounterRng& rng, CostLedger& ledger, NcsBackend backend = NcsBackend::Oja);

/// Exact smallest eigenpair of the mean Hessian at x; dense build through the
/// hvp oracle when present, otherwise central differences of the mean
/// gradient. Referee only, charges nothing.
std::pair<double, Vector> eigen_referee(const FiniteSumProblem& problem, const Vector& x,
                                        int dense_cap = 512);

struct BlockResult {
  bool stopped = false;
  Vector x;
  SpiderState state;
  long k = 0;
};

/// Signed mini-step second-order descent: draws one Rademacher sign, then
/// takes script_K steps of length eta along -+w1 while maintaining the
/// estimator on the mod-q schedule. forced_sign (+1/-1) bypasses the draw for
/// referee use.
BlockResult second_order_block(const FiniteSumProblem& problem, const Vector& x,
                               const Vector& w1, const SpiderState& state, const SspParams& sp,
                               long k, CounterRng& rng, CostLedger& ledger,
                               RunTrace* trace = nullptr, const TraceOptions& opts = {},
                               std::optional<int> forced_sign = std::nullopt);

/// Up to script_K normalized first-order steps maintaining the estimator;
/// stops at the first |v| <= 2 eps_tilde.
BlockResult first_order_block(const FiniteSumProblem& problem, const Vector& x,
                              const SpiderState& state, const SspParams& sp, long k,
                              CounterRng& rng, CostLedger& ledger, RunTrace* trace = nullptr,
                              const TraceOptions& opts = {});

/// Negative-curvature-aware variant: alternates NC-search with second- or
/// first-order blocks for at most J blocks / K0 iterations.
RunTrace run_sfo_plus(const FiniteSumProblem& problem, const SspParams& sp, std::uint64_t seed,
                      const TraceOptions& opts = {}, const Vector* x0_override = nullptr,
                      NcsBackend backend = NcsBackend::Oja);

}  // namespace spider
