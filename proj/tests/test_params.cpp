#include <doctest.h>

#include <cmath>

#include "spider/params.hpp"
#include "spider/suites.hpp"

using namespace spider;

namespace {
ProblemConstants online_constants(double L, double sigma, double Delta) {
  ProblemConstants c;
  c.L = L;
  c.sigma = sigma;
  c.Delta = Delta;
  c.n = 1000;
  c.d = 10;
  return c;
}
}  // namespace

TEST_CASE("online parameter arithmetic: sigma=1 eps=0.1 n0=1 L=1") {
  const AlgoParams p = derive_params(0.1, online_constants(1.0, 1.0, 1.0), 1.0, Mode::Online);
  CHECK(p.S1 == 200);
  CHECK(p.S2 == 20);
  CHECK(p.q == 10);
  CHECK(p.eta == doctest::Approx(0.1));
  CHECK(p.S1 == p.q * p.S2);
  CHECK(p.eta * p.L * p.n0 == doctest::Approx(p.eps));
}

TEST_CASE("finite-sum parameter arithmetic: n=100 n0=1 eps=0.1 L=1") {
  ProblemConstants c;
  c.L = 1.0;
  c.Delta = 1.0;
  c.n = 100;
  c.d = 4;
  const AlgoParams p = derive_params(0.1, c, 1.0, Mode::FiniteSum);
  CHECK(p.S2 == 10);
  CHECK(p.q == 10);
  CHECK(p.eta == doctest::Approx(0.1));
  CHECK(p.full_reset);
}

TEST_CASE("iteration budget: L=1 Delta=1 n0=1 eps=0.1 gives K=401") {
  const AlgoParams p = derive_params(0.1, online_constants(1.0, 1.0, 1.0), 1.0, Mode::Online);
  CHECK(p.K == 401);
  CHECK(p.K0 == 402);
}

TEST_CASE("stopping thresholds follow the stated formulas") {
  const double eps = 0.1, p_fail = 0.1;
  const AlgoParams online =
      derive_params(eps, online_constants(1.0, 1.0, 1.0), 1.0, Mode::Online, p_fail);
  const double expected_online = 10.0 * eps * std::log((4.0 * 400 + 12.0) / p_fail);
  CHECK(online.eps_tilde == doctest::Approx(expected_online));

  ProblemConstants cfs;
  cfs.L = 1.0;
  cfs.Delta = 1.0;
  cfs.n = 100;
  cfs.d = 4;
  const AlgoParams fs = derive_params(eps, cfs, 1.0, Mode::FiniteSum, p_fail);
  const double expected_fs = 16.0 * eps * std::log((4.0 * 400 + 12.0) / p_fail);
  CHECK(fs.eps_tilde == doctest::Approx(expected_fs));
}

TEST_CASE("parameter validation errors") {
  auto c = online_constants(1.0, 1.0, 1.0);
  CHECK_THROWS_AS(derive_params(0.1, c, 0.5, Mode::Online), std::invalid_argument);
  CHECK_THROWS_AS(derive_params(0.1, c, 25.0, Mode::Online), std::invalid_argument);
  ProblemConstants no_sigma;
  no_sigma.L = 1.0;
  no_sigma.Delta = 1.0;
  no_sigma.n = 10;
  CHECK_THROWS_AS(derive_params(0.1, no_sigma, 1.0, Mode::Online), std::invalid_argument);
  CHECK_THROWS_AS(derive_params(-0.1, c, 1.0, Mode::Online), std::invalid_argument);
}

TEST_CASE("second-order parameters: Theorem-6 arithmetic example") {
  ProblemConstants c = online_constants(1.0, 1.0, 1.0);
  c.rho = 1.0;
  const SspParams s = derive_params_ssp(0.04, c, 1.0, Mode::Online, 0.2);
  CHECK(s.script_K == 5);
  CHECK(s.J == 2004);
  CHECK(s.K0 == 2004 * 5);
  CHECK(s.eps_tilde ==
        doctest::Approx(10.0 * 0.04 * std::log(64.0 * (2004.0 * 5.0 + 1.0))));
}

TEST_CASE("default curvature tolerance is sqrt(rho eps)") {
  ProblemConstants c = online_constants(1.0, 1.0, 1.0);
  c.rho = 0.5;
  const SspParams s = derive_params_ssp(0.08, c, 1.0, Mode::Online);
  CHECK(s.delta == doctest::Approx(std::sqrt(0.5 * 0.08)));
}

TEST_CASE("ssp requires rho") {
  ProblemConstants c = online_constants(1.0, 1.0, 1.0);
  CHECK_THROWS_AS(derive_params_ssp(0.1, c, 1.0, Mode::Online), std::invalid_argument);
}

TEST_CASE("zeroth-order online arithmetic: d=10 sigma=1 eps=0.1 n0=1") {
  ProblemConstants c = online_constants(1.0, 1.0, 1.0);
  const SzoParams z = derive_params_szo(0.1, c, 1.0, Mode::Online);
  CHECK(z.base.S1 == 96000);
  CHECK(z.S1_per_coord == 9600);
  CHECK(z.base.S2 == 8700);
  CHECK(z.base.q == 50);
  const double mu1 = 0.1 / (2.0 * std::sqrt(6.0) * std::sqrt(10.0));
  const double mu2 = 0.1 / (std::sqrt(6.0) * std::pow(16.0, 1.5));
  CHECK(mu1 == doctest::Approx(0.0064550).epsilon(1e-4));
  CHECK(mu2 == doctest::Approx(0.000637888).epsilon(1e-5));
  CHECK(z.mu == doctest::Approx(std::min(mu1, mu2)));
}

TEST_CASE("zeroth-order finite-sum arithmetic: n=144 d=10") {
  ProblemConstants c;
  c.L = 1.0;
  c.Delta = 1.0;
  c.n = 144;
  c.d = 10;
  const SzoParams z = derive_params_szo(0.1, c, 1.0, Mode::FiniteSum);
  CHECK(z.base.S2 == 348);
  CHECK(z.base.q == 2);
  CHECK(z.full_reset);
  CHECK(z.S1_per_coord == 144);
}

TEST_CASE("zeroth-order n0 range checks") {
  ProblemConstants c;
  c.L = 1.0;
  c.Delta = 1.0;
  c.n = 144;
  c.d = 10;
  CHECK_THROWS_AS(derive_params_szo(0.1, c, 3.0, Mode::FiniteSum), std::invalid_argument);
}

TEST_CASE("constants from problem pick up metadata and the exact gap") {
  SuiteOptions opts;
  opts.uniform_curvature = true;
  opts.sigma_target = 0.5;
  opts.center_norm = 1.0;
  auto p = make_suite("quadratic", 6, 32, 11, opts);
  const ProblemConstants c = ProblemConstants::from_problem(*p, Vector::Zero(6));
  CHECK(c.L == doctest::Approx(1.0));
  REQUIRE(c.sigma.has_value());
  CHECK(*c.sigma == doctest::Approx(0.5));
  CHECK(c.Delta == doctest::Approx(0.5));
  CHECK(c.n == 32);
  CHECK(c.d == 6);
}
