#include "spider/params.hpp"

namespace spider {

namespace {
long ceil_long(double x) { return static_cast<long>(std::ceil(x - 1e-12)); }
long floor_long(double x) { return static_cast<long>(std::floor(x + 1e-12)); }
}  // namespace

ProblemConstants ProblemConstants::from_problem(const FiniteSumProblem& p, const Vector& x0) {
  ProblemConstants c;
  c.L = p.meta().L;
  c.sigma = p.meta().sigma;
  c.rho = p.meta().rho;
  c.n = p.n();
  c.d = p.d();
  if (p.meta().f_star)
    c.Delta = p.full_value(x0) - *p.meta().f_star;
  return c;
}

AlgoParams derive_params(double eps, const ProblemConstants& c, double n0, Mode mode,
                         double p_fail) {
  if (eps <= 0.0) throw std::invalid_argument("derive_params: eps must be positive");
  if (c.L <= 0.0 || c.Delta <= 0.0)
    throw std::invalid_argument("derive_params: L and Delta must be positive");
  if (p_fail <= 0.0 || p_fail >= 1.0)
    throw std::invalid_argument("derive_params: p_fail must lie in (0,1)");

  AlgoParams p;
  p.mode = mode;
  p.eps = eps;
  p.p_fail = p_fail;
  p.L = c.L;
  p.Delta = c.Delta;
  p.rho = c.rho.value_or(0.0);
  p.n0 = n0;
  p.n = c.n;
  p.eta = eps / (c.L * n0);

  const double kf = 4.0 * c.L * c.Delta * n0 / (eps * eps);
  p.K = floor_long(kf) + 1;
  p.K0 = floor_long(kf) + 2;
  const double log_arg = (4.0 * floor_long(kf) + 12.0) / p_fail;

  if (mode == Mode::Online) {
    if (!c.sigma)
      throw std::invalid_argument("derive_params: online mode requires a declared sigma");
    p.sigma = *c.sigma;
    if (n0 < 1.0 || n0 > 2.0 * p.sigma / eps)
      throw std::invalid_argument("derive_params: online n0 out of [1, 2 sigma / eps]");
    p.S2 = ceil_long(2.0 * p.sigma / (eps * n0));
    p.q = ceil_long(p.sigma * n0 / eps);
    p.S1 = p.q * p.S2;  // >= ceil(2 sigma^2 / eps^2), keeps S1 = q S2 exact
    p.full_reset = false;
    p.eps_tilde = 10.0 * eps * std::log(log_arg);
  } else {
    if (c.n < 1) throw std::invalid_argument("derive_params: finite-sum mode requires n");
    const double sqrt_n = std::sqrt(static_cast<double>(c.n));
    if (n0 < 1.0 || n0 > sqrt_n)
      throw std::invalid_argument("derive_params: finite-sum n0 out of [1, sqrt(n)]");
    p.sigma = c.sigma.value_or(0.0);
    p.S2 = ceil_long(sqrt_n / n0);
    p.q = ceil_long(n0 * sqrt_n);
    p.S1 = c.n;
    p.full_reset = true;
    p.eps_tilde = 16.0 * eps * std::log(log_arg);
  }
  return p;
}

SspParams derive_params_ssp(double eps, const ProblemConstants& c, double n0, Mode mode,
                            std::optional<double> delta) {
  if (!c.rho || *c.rho <= 0.0)
    throw std::invalid_argument("derive_params_ssp: rho must be declared and positive");
  SspParams s;
  s.base = derive_params(eps, c, n0, mode, 0.5);
  const double rho = *c.rho;
  s.delta = delta.value_or(std::sqrt(rho * eps));
  if (s.delta <= 0.0 || s.delta > c.L)
    throw std::invalid_argument("derive_params_ssp: delta must lie in (0, L]");
  s.script_K = std::max<long>(1, ceil_long(s.delta * c.L * n0 / (rho * eps)));
  const double j_arg =
      std::max(3.0 * rho * rho * c.Delta / (s.delta * s.delta * s.delta),
               4.0 * c.Delta * rho / (s.delta * eps));
  s.J = 4 * floor_long(j_arg) + 4;
  s.K0 = s.J * s.script_K;
  const double cmode = (mode == Mode::Online) ? 10.0 : 16.0;
  s.eps_tilde = cmode * eps * std::log(64.0 * (static_cast<double>(s.K0) + 1.0));
  return s;
}

SzoParams derive_params_szo(double eps, const ProblemConstants& c, double n0, Mode mode) {
  if (eps <= 0.0) throw std::invalid_argument("derive_params_szo: eps must be positive");
  if (c.d < 1) throw std::invalid_argument("derive_params_szo: dimension must be declared");
  if (c.L <= 0.0 || c.Delta <= 0.0)
    throw std::invalid_argument("derive_params_szo: L and Delta must be positive");
  const double d = static_cast<double>(c.d);

  SzoParams z;
  AlgoParams& b = z.base;
  b.mode = mode;
  b.eps = eps;
  b.L = c.L;
  b.Delta = c.Delta;
  b.rho = c.rho.value_or(0.0);
  b.n0 = n0;
  b.n = c.n;
  b.eta = eps / (c.L * n0);
  const double kf = 4.0 * c.L * c.Delta * n0 / (eps * eps);
  b.K = floor_long(kf) + 1;
  b.K0 = floor_long(kf) + 2;

  z.mu = std::min(eps / (2.0 * std::sqrt(6.0) * c.L * std::sqrt(d)),
                  eps / (std::sqrt(6.0) * n0 * c.L * std::pow(d + 6.0, 1.5)));

  if (mode == Mode::Online) {
    if (!c.sigma)
      throw std::invalid_argument("derive_params_szo: online mode requires a declared sigma");
    b.sigma = *c.sigma;
    if (n0 < 1.0 || n0 > 30.0 * (2.0 * d + 9.0) * b.sigma / eps)
      throw std::invalid_argument("derive_params_szo: online n0 out of range");
    const long S1 = ceil_long(96.0 * d * b.sigma * b.sigma / (eps * eps));
    z.S1_per_coord = std::max<long>(1, ceil_long(static_cast<double>(S1) / d));
    b.S1 = z.S1_per_coord * c.d;
    b.S2 = ceil_long(30.0 * (2.0 * d + 9.0) * b.sigma / (eps * n0));
    b.q = ceil_long(5.0 * n0 * b.sigma / eps);
    z.full_reset = false;
  } else {
    if (c.n < 1) throw std::invalid_argument("derive_params_szo: finite-sum mode requires n");
    const double sqrt_n = std::sqrt(static_cast<double>(c.n));
    if (n0 < 1.0 || n0 > sqrt_n / 6.0)
      throw std::invalid_argument("derive_params_szo: finite-sum n0 out of [1, sqrt(n)/6]");
    b.sigma = c.sigma.value_or(0.0);
    b.S2 = ceil_long((2.0 * d + 9.0) * sqrt_n / n0);
    b.q = std::max<long>(1, ceil_long(n0 * sqrt_n / 6.0));
    z.S1_per_coord = c.n;
    b.S1 = c.n * c.d;
    z.full_reset = true;
  }
  b.full_reset = z.full_reset;
  return z;
}

}  // namespace spider
