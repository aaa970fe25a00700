#pragma once

#include "spider/estimator.hpp"
#include "spider/params.hpp"
#include "spider/trace.hpp"

namespace spider {

enum class StepOption { NormalizedStop = 1, ClippedAverage = 2 };

/// Normalized step: displacement is exactly eta along -v/|v|. The caller must
/// have taken the |v| <= 2 eps_tilde stop branch first; v = 0 here is a
/// contract violation.
Vector step_option1(const Vector& x, const Vector& v, double eta);

/// Clipped step x - eta_k v with eta_k = min(eps / (L n0 |v|), 1 / (2 L n0));
/// displacement never exceeds eps / (L n0), v = 0 allowed.
Vector step_option2(const Vector& x, const Vector& v, double eps, double L, double n0);

/// Variance-reduced normalized-gradient loop over the problem's gradient
/// oracle. Option I runs up to K0 iterations and stops at the first
/// |v^k| <= 2 eps_tilde; Option II runs exactly K iterations and returns a
/// uniformly drawn iterate (drawn after the loop, so the trajectory is
/// option-agnostic for a given seed).
RunTrace run_sfo(const FiniteSumProblem& problem, const AlgoParams& params, StepOption option,
                 std::uint64_t seed, const TraceOptions& opts = {},
                 const Vector* x0_override = nullptr);

}  // namespace spider
