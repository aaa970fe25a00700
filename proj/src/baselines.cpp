#include "spider/baselines.hpp"

#include <chrono>
#include <cmath>

#include "spider/rng.hpp"

namespace spider {

BaselineParams BaselineParams::sgd_for_eps(double eps, double L, double sigma, long budget,
                                           double c) {
  BaselineParams p;
  p.step = c * eps * eps / (L * sigma * sigma);
  p.batch = 1;
  p.budget = budget;
  p.target_eps = eps;
  return p;
}

namespace {

struct StopTracker {
  double target_sq = 0.0;
  long stride = 100;
  double sum_sq = 0.0;
  long checks = 0;

  /// Returns true once the running mean of squared referee gradient norms
  /// reaches the target.
  bool update(long k, const FiniteSumProblem& problem, const Vector& x) {
    if (target_sq <= 0.0) return false;
    if (k % stride != 0) return false;
    sum_sq += problem.full_grad(x).squaredNorm();
    ++checks;
    return sum_sq / checks <= target_sq;
  }
};

void push_baseline_row(RunTrace& trace, const FiniteSumProblem& problem,
                       const TraceOptions& opts, long k, const Vector& x, double v_norm,
                       TraceEvent event) {
  TraceRow row;
  row.k = k;
  row.v_norm = v_norm;
  if (opts.record_f) row.f_value = problem.full_value(x);
  if (opts.grad_referee) row.grad_norm = problem.full_grad(x).norm();
  row.sfo_cost = trace.ledger.sfo;
  row.sfo_cost_paper = trace.ledger.sfo_paper;
  row.izo_cost = trace.ledger.izo;
  row.event = event;
  trace.rows.push_back(row);
}

void finish(RunTrace& trace, const FiniteSumProblem& problem, const Vector& x, bool reached,
            std::chrono::steady_clock::time_point t_start) {
  trace.status = reached ? RunStatus::Stopped : RunStatus::Completed;
  trace.x_out = x;
  trace.final_grad_norm = problem.full_grad(x).norm();
  trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
}

}  // namespace

RunTrace run_sgd(const FiniteSumProblem& problem, const BaselineParams& params,
                 std::uint64_t seed, const TraceOptions& opts, const Vector* x0_override) {
  const auto t_start = std::chrono::steady_clock::now();
  CounterRng rng(seed);
  RunTrace trace;
  Vector x = x0_override ? *x0_override : Vector::Zero(problem.d());
  problem.check_dim(x);
  StopTracker stop{params.target_eps * params.target_eps, params.check_stride, 0.0, 0};

  bool reached = false;
  for (long k = 0; k < params.budget; ++k) {
    if (stop.update(k, problem, x)) {
      reached = true;
      trace.stop_k = k;
      break;
    }
    Vector g = Vector::Zero(problem.d());
    for (long b = 0; b < params.batch; ++b) {
      const int i = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(problem.n())));
      g += problem.grad(i, x);
    }
    g /= static_cast<double>(params.batch);
    trace.ledger.charge_grad(static_cast<std::uint64_t>(params.batch));
    const double eta =
        params.sqrt_decay ? params.step / std::sqrt(static_cast<double>(k + 1)) : params.step;
    if ((opts.record_f || opts.grad_referee) && k % opts.stride == 0)
      push_baseline_row(trace, problem, opts, k, x, g.norm(), TraceEvent::Advance);
    x -= eta * g;
  }
  finish(trace, problem, x, reached, t_start);
  return trace;
}

RunTrace run_svrg(const FiniteSumProblem& problem, const BaselineParams& params,
                  std::uint64_t seed, const TraceOptions& opts, const Vector* x0_override) {
  const auto t_start = std::chrono::steady_clock::now();
  CounterRng rng(seed);
  RunTrace trace;
  Vector x = x0_override ? *x0_override : Vector::Zero(problem.d());
  problem.check_dim(x);
  const long m = params.epoch_length > 0 ? params.epoch_length : problem.n();
  StopTracker stop{params.target_eps * params.target_eps, params.check_stride, 0.0, 0};

  Vector snapshot = x;
  Vector snapshot_grad;
  bool reached = false;
  for (long k = 0; k < params.budget; ++k) {
    if (k % m == 0) {
      snapshot = x;
      snapshot_grad = problem.full_grad(snapshot);
      trace.ledger.charge_grad(static_cast<std::uint64_t>(problem.n()));
    }
    if (stop.update(k, problem, x)) {
      reached = true;
      trace.stop_k = k;
      break;
    }
    const int i = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(problem.n())));
    const Vector g = problem.grad(i, x) - problem.grad(i, snapshot) + snapshot_grad;
    trace.ledger.charge_grad(2);
    if ((opts.record_f || opts.grad_referee) && k % opts.stride == 0)
      push_baseline_row(trace, problem, opts, k, x, g.norm(),
                        k % m == 0 ? TraceEvent::Reset : TraceEvent::Advance);
    x -= params.step * g;
  }
  finish(trace, problem, x, reached, t_start);
  return trace;
}

RunTrace run_gd(const FiniteSumProblem& problem, const BaselineParams& params,
                const TraceOptions& opts, const Vector* x0_override) {
  const auto t_start = std::chrono::steady_clock::now();
  RunTrace trace;
  Vector x = x0_override ? *x0_override : Vector::Zero(problem.d());
  problem.check_dim(x);
  bool reached = false;
  for (long k = 0; k < params.budget; ++k) {
    const Vector g = problem.full_grad(x);
    trace.ledger.charge_grad(static_cast<std::uint64_t>(problem.n()));
    if (params.target_eps > 0.0 && g.norm() <= params.target_eps) {
      reached = true;
      trace.stop_k = k;
      break;
    }
    if ((opts.record_f || opts.grad_referee) && k % opts.stride == 0)
      push_baseline_row(trace, problem, opts, k, x, g.norm(), TraceEvent::Advance);
    x -= params.step * g;
  }
  finish(trace, problem, x, reached, t_start);
  return trace;
}

RunTrace run_ngd(const FiniteSumProblem& problem, const BaselineParams& params,
                 const TraceOptions& opts, const Vector* x0_override) {
  const auto t_start = std::chrono::steady_clock::now();
  RunTrace trace;
  Vector x = x0_override ? *x0_override : Vector::Zero(problem.d());
  problem.check_dim(x);
  bool reached = false;
  for (long k = 0; k < params.budget; ++k) {
    const Vector g = problem.full_grad(x);
    trace.ledger.charge_grad(static_cast<std::uint64_t>(problem.n()));
    const double norm = g.norm();
    if (params.target_eps > 0.0 && norm <= params.target_eps) {
      reached = true;
      trace.stop_k = k;
      break;
    }
    if ((opts.record_f || opts.grad_referee) && k % opts.stride == 0)
      push_baseline_row(trace, problem, opts, k, x, norm, TraceEvent::Advance);
    if (norm > 0.0) x -= (params.step / norm) * g;
  }
  finish(trace, problem, x, reached, t_start);
  return trace;
}

}  // namespace spider
