#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "spider/problem.hpp"

namespace spider {

enum class Mode { Online, FiniteSum };

/// Problem constants the parameter formulas consume. Delta is the initial
/// gap f(x0) - f*; sigma is required in online mode only, rho only by the
/// second-order variant.
struct ProblemConstants {
  double L = 1.0;
  double Delta = 1.0;
  std::optional<double> sigma;
  std::optional<double> rho;
  long n = 0;  // component count, needed in finite-sum mode
  int d = 0;   // dimension, needed by the zeroth-order formulas

  static ProblemConstants from_problem(const FiniteSumProblem& p, const Vector& x0);
};

/// Derived first-order parameter pack. Batch sizes round up; in online mode
/// S1 is then fixed to q * S2 so the telescoped cost identity is exact.
struct AlgoParams {
  Mode mode = Mode::FiniteSum;
  double eps = 0.1;
  double eps_tilde = 0.0;  // stopping threshold, Theorem-4/5 default
  double p_fail = 0.1;
  double L = 1.0, Delta = 1.0, sigma = 0.0, rho = 0.0;
  double n0 = 1.0;
  long n = 0;

  long S1 = 0;  // online reset batch; ignored under full_reset
  long S2 = 0;
  long q = 0;
  double eta = 0.0;  // eps / (L n0)
  long K = 0;        // floor(4 L Delta n0 / eps^2) + 1, expectation budget
  long K0 = 0;       // +2 variant, high-probability budget
  bool full_reset = false;
};

AlgoParams derive_params(double eps, const ProblemConstants& c, double n0, Mode mode,
                         double p_fail = 0.1);

/// Second-order (negative-curvature) parameter pack, Theorem-6 formulas.
struct SspParams {
  AlgoParams base;
  double delta = 0.0;   // curvature tolerance; default sqrt(rho * eps)
  long script_K = 0;    // ceil(delta L n0 / (rho eps)) mini-steps per block
  long J = 0;           // outer block budget
  long K0 = 0;          // J * script_K iteration budget
  double eps_tilde = 0.0;
};

SspParams derive_params_ssp(double eps, const ProblemConstants& c, double n0, Mode mode,
                            std::optional<double> delta = std::nullopt);

/// Zeroth-order parameter pack, Theorem-7 formulas.
struct SzoParams {
  AlgoParams base;
  double mu = 0.0;
  long S1_per_coord = 0;  // online coordinate reset batch; full data otherwise
  bool full_reset = false;
};

SzoParams derive_params_szo(double eps, const ProblemConstants& c, double n0, Mode mode);

}  // namespace spider
