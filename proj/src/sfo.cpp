#include "spider/sfo.hpp"

#include <chrono>
#include <cmath>

namespace spider {

Vector step_option1(const Vector& x, const Vector& v, double eta) {
  const double norm = v.norm();
  if (norm <= 0.0)
    throw std::logic_error("step_option1: v = 0 must be handled by the stop branch");
  return x - (eta / norm) * v;
}

Vector step_option2(const Vector& x, const Vector& v, double eps, double L, double n0) {
  const double norm = v.norm();
  const double cap = 1.0 / (2.0 * L * n0);
  const double eta_k = norm > 0.0 ? std::min(eps / (L * n0 * norm), cap) : cap;
  return x - eta_k * v;
}

namespace {

void push_row(RunTrace& trace, const FiniteSumProblem& problem, const TraceOptions& opts,
              long k, const Vector& x, double v_norm, TraceEvent event) {
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

}  // namespace

RunTrace run_sfo(const FiniteSumProblem& problem, const AlgoParams& params, StepOption option,
                 std::uint64_t seed, const TraceOptions& opts, const Vector* x0_override) {
  const auto t_start = std::chrono::steady_clock::now();
  CounterRng rng(seed);
  RunTrace trace;

  Vector x = x0_override ? *x0_override : Vector::Zero(problem.d());
  problem.check_dim(x);
  std::vector<Vector> iterates;
  const long budget = option == StepOption::NormalizedStop ? params.K0 : params.K;
  iterates.reserve(budget);

  const BatchSpec reset_batch =
      params.full_reset ? BatchSpec::full_batch() : BatchSpec::samples(params.S1);
  SpiderState state;
  bool stopped = false;

  for (long k = 0; k < budget; ++k) {
    const bool reset_step = (k % params.q == 0);
    if (reset_step) {
      state = spider_reset(problem, x, reset_batch, params.q, rng, trace.ledger);
      state.k = k;
    } else {
      state = spider_advance(problem, state, x, params.S2, rng, trace.ledger);
    }
    const double v_norm = state.v.norm();

    if (option == StepOption::NormalizedStop && v_norm <= 2.0 * params.eps_tilde) {
      push_row(trace, problem, opts, k, x, v_norm, TraceEvent::Stop);
      trace.status = RunStatus::Stopped;
      trace.stop_k = k;
      trace.x_out = x;
      stopped = true;
      break;
    }
    push_row(trace, problem, opts, k, x, v_norm,
             reset_step ? TraceEvent::Reset : TraceEvent::Advance);

    iterates.push_back(x);
    if (option == StepOption::NormalizedStop)
      x = step_option1(x, state.v, params.eta);
    else
      x = step_option2(x, state.v, params.eps, params.L, params.n0);
  }

  if (!stopped) {
    if (option == StepOption::NormalizedStop) {
      // Budget exhausted without the stopping event; the analysis marks this
      // branch low-probability, so it is reported rather than raised.
      trace.status = RunStatus::Exhausted;
      trace.x_out = x;
    } else {
      const long pick = static_cast<long>(rng.next_below(static_cast<std::uint64_t>(params.K)));
      trace.status = RunStatus::Completed;
      trace.x_out = iterates[pick];
    }
  }
  trace.final_grad_norm = problem.full_grad(trace.x_out).norm();
  trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return trace;
}

}  // namespace spider
