#include "spider/ssp.hpp"

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>

#include "spider/sfo.hpp"

namespace spider {

namespace {

/// Stochastic Hessian-vector surrogate at x along unit w, using only two
/// gradient accesses of one component.
Vector hvp_surrogate(const FiniteSumProblem& problem, const Vector& x, const Vector& w,
                     double a, int i, CostLedger& ledger) {
  ledger.charge_grad(2);
  return (problem.grad(i, x + a * w) - problem.grad(i, x)) / a;
}

}  // namespace

NcsOutcome nc_search(const FiniteSumProblem& problem, const Vector& x, double delta, double p,
                     CounterRng& rng, CostLedger& ledger, NcsBackend backend) {
  const double L = problem.meta().L;
  if (delta <= 0.0 || delta > 2.0 * L)
    throw std::invalid_argument("nc_search: delta must lie in (0, 2L]");
  if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("nc_search: p must lie in (0,1)");

  // Decision threshold sits midway between the two contract levels -delta
  // (Bot soundness) and -delta/2 (Direction soundness).
  const double threshold = -0.75 * delta;

  if (backend == NcsBackend::Exact) {
    auto [lmin, vec] = eigen_referee(problem, x);
    if (lmin <= threshold) {
      NcsOutcome out;
      out.found = true;
      out.w1 = vec;
      out.rayleigh_estimate = lmin;
      return out;
    }
    return NcsOutcome::bot();
  }

  const int d = problem.d();
  const int n = problem.n();
  const double a = delta / (16.0 * L);  // surrogate displacement
  const double shift = L;               // L I - H is PSD up to the curvature cap
  const double log_term = std::log(static_cast<double>(d) / p + 2.0);
  const double ratio = 2.0 * L / delta;
  const long iters = static_cast<long>(std::ceil(4.0 * ratio * ratio * log_term));
  const long rayleigh_samples = static_cast<long>(std::ceil(8.0 * ratio * ratio * log_term));
  const int replicas = 2;

  Vector best_w;
  double best_r = std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < replicas; ++rep) {
    Vector w(d);
    for (int j = 0; j < d; ++j) w[j] = rng.next_gaussian();
    w.normalize();
    // Streaming power iteration on (shift I - H): step size decays after a
    // warmup third so early noise cannot freeze the iterate.
    const long warmup = iters / 3 + 1;
    for (long t = 0; t < iters; ++t) {
      const int i = static_cast<int>(rng.next_below(n));
      const Vector hw = hvp_surrogate(problem, x, w, a, i, ledger);
      const double eta = 1.0 / (2.0 * L * std::sqrt(static_cast<double>(std::max(t, warmup))));
      w += eta * (shift * w - hw);
      w.normalize();
    }
    // Averaged Rayleigh verification of the candidate.
    double r = 0.0;
    for (long s = 0; s < rayleigh_samples; ++s) {
      const int i = static_cast<int>(rng.next_below(n));
      r += w.dot(hvp_surrogate(problem, x, w, a, i, ledger));
    }
    r /= static_cast<double>(rayleigh_samples);
    if (r < best_r) {
      best_r = r;
      best_w = w;
    }
  }

  if (best_r <= threshold) {
    NcsOutcome out;
    out.found = true;
    out.w1 = best_w.normalized();
    out.rayleigh_estimate = best_r;
    return out;
  }
  return NcsOutcome::bot();
}

std::pair<double, Vector> eigen_referee(const FiniteSumProblem& problem, const Vector& x,
                                        int dense_cap) {
  const int d = problem.d();
  if (d > dense_cap)
    throw std::invalid_argument("eigen_referee: dimension exceeds the dense cap");
  Matrix H(d, d);
  if (problem.has_hvp()) {
    for (int j = 0; j < d; ++j) {
      Vector ej = Vector::Zero(d);
      ej[j] = 1.0;
      Vector col = Vector::Zero(d);
      for (int i = 0; i < problem.n(); ++i) col += problem.hvp(i, x, ej);
      H.col(j) = col / problem.n();
    }
  } else {
    const double h = 1e-5 * std::max(1.0, x.norm());
    for (int j = 0; j < d; ++j) {
      Vector xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      H.col(j) = (problem.full_grad(xp) - problem.full_grad(xm)) / (2.0 * h);
    }
  }
  H = 0.5 * (H + H.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(H);
  int arg = 0;
  es.eigenvalues().minCoeff(&arg);
  return {es.eigenvalues()[arg], es.eigenvectors().col(arg)};
}

namespace {

void push_ssp_row(RunTrace* trace, const FiniteSumProblem& problem, const TraceOptions& opts,
                  long k, const Vector& x, double v_norm, TraceEvent event,
                  const CostLedger& ledger) {
  if (!trace) return;
  TraceRow row;
  row.k = k;
  row.v_norm = v_norm;
  if (opts.record_f) row.f_value = problem.full_value(x);
  if (opts.grad_referee) row.grad_norm = problem.full_grad(x).norm();
  row.sfo_cost = ledger.sfo;
  row.sfo_cost_paper = ledger.sfo_paper;
  row.izo_cost = ledger.izo;
  row.event = event;
  trace->rows.push_back(row);
}

SpiderState maintain(const FiniteSumProblem& problem, const SpiderState& state, const Vector& x,
                     const AlgoParams& base, long k, CounterRng& rng, CostLedger& ledger,
                     bool* was_reset) {
  const BatchSpec reset_batch =
      base.full_reset ? BatchSpec::full_batch() : BatchSpec::samples(base.S1);
  *was_reset = (k % base.q == 0);
  if (*was_reset) {
    SpiderState st = spider_reset(problem, x, reset_batch, base.q, rng, ledger);
    st.k = k;
    return st;
  }
  return spider_advance(problem, state, x, base.S2, rng, ledger);
}

}  // namespace

BlockResult second_order_block(const FiniteSumProblem& problem, const Vector& x,
                               const Vector& w1, const SpiderState& state, const SspParams& sp,
                               long k, CounterRng& rng, CostLedger& ledger, RunTrace* trace,
                               const TraceOptions& opts, std::optional<int> forced_sign) {
  const int sign = forced_sign ? *forced_sign : rng.next_sign();
  const Vector w2 = (sign * sp.base.eta) * w1;
  BlockResult res;
  res.x = x;
  res.state = state;
  res.k = k;
  for (long t = 0; t < sp.script_K; ++t) {
    bool was_reset = false;
    res.state = maintain(problem, res.state, res.x, sp.base, res.k, rng, ledger, &was_reset);
    push_ssp_row(trace, problem, opts, res.k, res.x, res.state.v.norm(),
                 was_reset ? TraceEvent::Reset : TraceEvent::Advance, ledger);
    res.x = res.x - w2;
    ++res.k;
  }
  return res;
}

BlockResult first_order_block(const FiniteSumProblem& problem, const Vector& x,
                              const SpiderState& state, const SspParams& sp, long k,
                              CounterRng& rng, CostLedger& ledger, RunTrace* trace,
                              const TraceOptions& opts) {
  BlockResult res;
  res.x = x;
  res.state = state;
  res.k = k;
  for (long t = 0; t < sp.script_K; ++t) {
    bool was_reset = false;
    res.state = maintain(problem, res.state, res.x, sp.base, res.k, rng, ledger, &was_reset);
    const double v_norm = res.state.v.norm();
    if (v_norm <= 2.0 * sp.eps_tilde) {
      push_ssp_row(trace, problem, opts, res.k, res.x, v_norm, TraceEvent::Stop, ledger);
      res.stopped = true;
      return res;
    }
    push_ssp_row(trace, problem, opts, res.k, res.x, v_norm,
                 was_reset ? TraceEvent::Reset : TraceEvent::Advance, ledger);
    res.x = step_option1(res.x, res.state.v, sp.base.eta);
    ++res.k;
  }
  return res;
}

RunTrace run_sfo_plus(const FiniteSumProblem& problem, const SspParams& sp, std::uint64_t seed,
                      const TraceOptions& opts, const Vector* x0_override, NcsBackend backend) {
  const auto t_start = std::chrono::steady_clock::now();
  CounterRng rng(seed);
  RunTrace trace;
  Vector x = x0_override ? *x0_override : Vector::Zero(problem.d());
  problem.check_dim(x);

  SpiderState state;
  long k = 0;
  const double p_ncs = 1.0 / (16.0 * static_cast<double>(sp.J));
  bool stopped = false;

  for (long j = 0; j < sp.J && k < sp.K0; ++j) {
    // Algorithm-level call at tolerance 2 delta: Bot certifies
    // lambda_min >= -2 delta, a direction has curvature <= -delta.
    const NcsOutcome ncs =
        nc_search(problem, x, 2.0 * sp.delta, p_ncs, rng, trace.ledger, backend);
    push_ssp_row(&trace, problem, opts, k, x, state.v.size() ? state.v.norm()
                                                             : std::numeric_limits<double>::quiet_NaN(),
                 TraceEvent::Ncs, trace.ledger);
    BlockResult res;
    if (ncs.found)
      res = second_order_block(problem, x, ncs.w1, state, sp, k, rng, trace.ledger, &trace, opts);
    else
      res = first_order_block(problem, x, state, sp, k, rng, trace.ledger, &trace, opts);
    x = res.x;
    state = res.state;
    k = res.k;
    if (res.stopped) {
      trace.status = RunStatus::Stopped;
      trace.stop_k = k;
      stopped = true;
      break;
    }
  }
  if (!stopped) trace.status = RunStatus::Exhausted;
  trace.x_out = x;
  trace.final_grad_norm = problem.full_grad(x).norm();
  trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return trace;
}

}  // namespace spider
