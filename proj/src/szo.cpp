#include "spider/szo.hpp"

#include <chrono>
#include <cmath>

#include "spider/sfo.hpp"

namespace spider {

SpiderState coord_reset(const ZerothOrderView& problem, const Vector& x, double mu,
                        long S1_per_coord, bool full, long q, CounterRng& rng,
                        CostLedger& ledger) {
  if (mu <= 0.0) throw std::invalid_argument("coord_reset: mu must be positive");
  const int d = problem.d();
  SpiderState state;
  state.x_prev = x;
  state.epoch_pos = 0;
  state.q = q;
  state.v = Vector::Zero(d);

  if (full) {
    const double base = problem.full_value(x);
    Vector xp = x;
    for (int j = 0; j < d; ++j) {
      const double save = xp[j];
      xp[j] = save + mu;
      state.v[j] = (problem.full_value(xp) - base) / mu;
      xp[j] = save;
    }
    ledger.charge_izo(2ull * d * problem.n());
  } else {
    if (S1_per_coord < 1) throw std::invalid_argument("coord_reset: S1' must be >= 1");
    const int n = problem.n();
    std::vector<int> batch(S1_per_coord);
    for (long s = 0; s < S1_per_coord; ++s)
      batch[s] = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    Vector xp = x;
    for (int j = 0; j < d; ++j) {
      const double save = xp[j];
      xp[j] = save + mu;
      double acc = 0.0;
      for (int i : batch) acc += problem.value(i, xp) - problem.value(i, x);
      state.v[j] = acc / (mu * static_cast<double>(S1_per_coord));
      xp[j] = save;
    }
    ledger.charge_izo(2ull * d * static_cast<std::uint64_t>(S1_per_coord));
  }
  return state;
}

SpiderState gaussian_pair_advance(const ZerothOrderView& problem, const SpiderState& state,
                                  const Vector& x_new, double mu, long S2, CounterRng& rng,
                                  CostLedger& ledger) {
  if (mu <= 0.0) throw std::invalid_argument("gaussian_pair_advance: mu must be positive");
  if (S2 < 1) throw std::invalid_argument("gaussian_pair_advance: S2 must be >= 1");
  if (state.epoch_pos + 1 >= state.q)
    throw std::logic_error("gaussian_pair_advance: epoch exhausted, reset required");
  const int d = problem.d();
  const int n = problem.n();
  Vector acc = Vector::Zero(d);
  Vector u(d);
  for (long s = 0; s < S2; ++s) {
    const int i = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    for (int j = 0; j < d; ++j) u[j] = rng.next_gaussian();
    const double new_diff = problem.value(i, x_new + mu * u) - problem.value(i, x_new);
    const double old_diff = problem.value(i, state.x_prev + mu * u) - problem.value(i, state.x_prev);
    acc += ((new_diff - old_diff) / mu) * u;
  }
  SpiderState next;
  next.v = state.v + acc / static_cast<double>(S2);
  next.x_prev = x_new;
  next.epoch_pos = state.epoch_pos + 1;
  next.q = state.q;
  next.k = state.k + 1;
  ledger.charge_izo(4ull * static_cast<std::uint64_t>(S2));
  return next;
}

RunTrace run_szo(const FiniteSumProblem& problem, const SzoParams& params, std::uint64_t seed,
                 const TraceOptions& opts, const Vector* x0_override) {
  const auto t_start = std::chrono::steady_clock::now();
  const AlgoParams& base = params.base;
  CounterRng rng(seed);
  RunTrace trace;
  ZerothOrderView view(problem);  // the optimizer path never touches gradients

  Vector x = x0_override ? *x0_override : Vector::Zero(problem.d());
  problem.check_dim(x);
  std::vector<Vector> iterates;
  iterates.reserve(base.K);
  SpiderState state;

  for (long k = 0; k < base.K; ++k) {
    const bool reset_step = (k % base.q == 0);
    if (reset_step) {
      state = coord_reset(view, x, params.mu, params.S1_per_coord, params.full_reset, base.q,
                          rng, trace.ledger);
      state.k = k;
    } else {
      state = gaussian_pair_advance(view, state, x, params.mu, base.S2, rng, trace.ledger);
    }
    TraceRow row;
    row.k = k;
    row.v_norm = state.v.norm();
    if (opts.record_f) row.f_value = problem.full_value(x);
    if (opts.grad_referee) row.grad_norm = problem.full_grad(x).norm();
    row.sfo_cost = trace.ledger.sfo;
    row.sfo_cost_paper = trace.ledger.sfo_paper;
    row.izo_cost = trace.ledger.izo;
    row.event = reset_step ? TraceEvent::Reset : TraceEvent::Advance;
    trace.rows.push_back(row);

    iterates.push_back(x);
    x = step_option2(x, state.v, base.eps, base.L, base.n0);
  }

  const long pick = static_cast<long>(rng.next_below(static_cast<std::uint64_t>(base.K)));
  trace.status = RunStatus::Completed;
  trace.x_out = iterates[pick];
  trace.final_grad_norm = problem.full_grad(trace.x_out).norm();
  trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return trace;
}

SmoothedGradEstimate smoothed_grad_referee(const FiniteSumProblem& problem, const Vector& x,
                                           double mu, long trials, CounterRng rng) {
  if (trials < 1) throw std::invalid_argument("smoothed_grad_referee: trials must be >= 1");
  const int d = problem.d();
  const int n = problem.n();
  Vector mean = Vector::Zero(d);
  Vector m2 = Vector::Zero(d);
  Vector u(d);
  for (long t = 0; t < trials; ++t) {
    const int i = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    for (int j = 0; j < d; ++j) u[j] = rng.next_gaussian();
    const Vector sample = ((problem.value(i, x + mu * u) - problem.value(i, x)) / mu) * u;
    const Vector delta = sample - mean;
    mean += delta / static_cast<double>(t + 1);
    m2 += delta.cwiseProduct(sample - mean);
  }
  SmoothedGradEstimate est;
  est.mean = mean;
  est.trials = trials;
  if (trials > 1)
    est.norm_std_error =
        std::sqrt(m2.sum() / (static_cast<double>(trials - 1) * static_cast<double>(trials)));
  return est;
}

}  // namespace spider
