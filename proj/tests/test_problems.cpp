#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "spider/suites.hpp"
#include "test_util.hpp"

using namespace spider;

namespace {
std::vector<Vector> random_points(int d, int count, double scale, CounterRng& rng) {
  std::vector<Vector> pts(count);
  for (auto& p : pts) {
    p = Vector(d);
    for (int j = 0; j < d; ++j) p[j] = scale * rng.next_gaussian();
  }
  return pts;
}
}  // namespace

TEST_CASE("identity quadratic with zero centers has grad x and sigma 0") {
  const int d = 4, n = 3;
  std::vector<Vector> a(n, Vector::Ones(d)), c(n, Vector::Zero(d));
  QuadraticProblem p(a, c);
  Vector x(d);
  x << 1.0, -2.0, 0.5, 3.0;
  CHECK((p.full_grad(x) - x).norm() == doctest::Approx(0.0));
  REQUIRE(p.meta().sigma.has_value());
  CHECK(*p.meta().sigma == doctest::Approx(0.0));
  CHECK(p.meta().L == doctest::Approx(1.0));
  CHECK(*p.meta().f_star == doctest::Approx(0.0));
}

TEST_CASE("quadratic suite declares exact f* and passes the fd referee") {
  auto p = make_suite("quadratic", 6, 8, 123);
  CounterRng rng(7);
  const auto pts = random_points(6, 5, 1.0, rng);
  const auto report = finite_difference_referee(*p, pts, 1e-4);
  CHECK(report.max_rel_error <= 1e-7);
  CHECK(report.flagged.empty());

  // f* is the exact minimum: gradient vanishes there.
  auto* q = dynamic_cast<const QuadraticProblem*>(p.get());
  REQUIRE(q != nullptr);
  CHECK(p->full_grad(q->minimizer()).norm() <= 1e-12);
  const auto probe = random_points(6, 5, 0.5, rng);
  for (const auto& x : probe) CHECK(p->full_value(x) >= *p->meta().f_star - 1e-12);
}

TEST_CASE("fd referee at the quadratic minimizer sees both sides near zero") {
  auto p = make_suite("quadratic", 4, 4, 5);
  auto* q = dynamic_cast<const QuadraticProblem*>(p.get());
  REQUIRE(q != nullptr);
  CHECK(p->full_grad(q->minimizer()).norm() == doctest::Approx(0.0).epsilon(1e-10));
  const auto report = finite_difference_referee(*p, {q->minimizer()}, 1e-4);
  CHECK(report.max_rel_error <= 1e-7);
}

TEST_CASE("uniform-curvature quadratic hits the requested sigma exactly") {
  SuiteOptions opts;
  opts.uniform_curvature = true;
  opts.sigma_target = 0.5;
  opts.center_norm = 1.0;
  auto p = make_suite("quadratic", 8, 64, 99, opts);
  REQUIRE(p->meta().sigma.has_value());
  CHECK(*p->meta().sigma == doctest::Approx(0.5).epsilon(1e-10));
  // Delta for x0 = 0 is center_norm^2 / 2 under unit curvature.
  const double delta = p->full_value(Vector::Zero(8)) - *p->meta().f_star;
  CHECK(delta == doctest::Approx(0.5).epsilon(1e-10));
  // Declared sigma matches the measured bound (constant in x here).
  CounterRng rng(3);
  const double measured = measure_sigma(*p, random_points(8, 4, 1.0, rng));
  CHECK(measured == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("nonconvex logistic passes a 1e-5 central-difference check at 100 points") {
  auto p = make_suite("nonconvex-logistic", 5, 20, 42);
  CounterRng rng(11);
  const auto pts = random_points(5, 100, 1.0, rng);
  const auto report = finite_difference_referee(*p, pts, 1e-5, 1e-5);
  CHECK(report.max_rel_error <= 1e-5);
  CHECK(report.flagged.empty());
}

TEST_CASE("suite problems satisfy the mean-square Lipschitz bound empirically") {
  for (const char* name : {"quadratic", "nonconvex-logistic", "saddle-quartic"}) {
    auto p = make_suite(name, 5, 12, 17);
    CounterRng rng(23);
    const double L2 = p->meta().L * p->meta().L;
    const double box = std::min(p->meta().box_inf, 2.0);
    for (int trial = 0; trial < 30; ++trial) {
      Vector x(5), y(5);
      for (int j = 0; j < 5; ++j) {
        x[j] = box * (rng.next_double() - 0.5);
        y[j] = box * (rng.next_double() - 0.5);
      }
      double acc = 0.0;
      for (int i = 0; i < p->n(); ++i) acc += (p->grad(i, x) - p->grad(i, y)).squaredNorm();
      acc /= p->n();
      CHECK(acc <= L2 * (x - y).squaredNorm() * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("declared sigma dominates the measured variance bound on probes") {
  for (const char* name : {"nonconvex-logistic", "saddle-quartic"}) {
    auto p = make_suite(name, 4, 10, 31);
    REQUIRE(p->meta().sigma.has_value());
    CounterRng rng(13);
    const double box = std::min(p->meta().box_inf, 1.5);
    const double measured = measure_sigma(*p, random_points(4, 20, box / 2.0, rng));
    CHECK(measured <= *p->meta().sigma * (1.0 + 1e-9));
  }
}

TEST_CASE("saddle-quartic diag(1,-1) b=1 spectrum and minimizers") {
  std::vector<Matrix> hs{(Matrix(2, 2) << 1, 0, 0, -1).finished()};
  SaddleQuarticProblem p(hs, 1.0);
  CHECK(p.origin_lambda_min() == doctest::Approx(-1.0));
  auto [lmin, vec] = [&]() {
    Eigen::SelfAdjointEigenSolver<Matrix> es(p.mean_hessian());
    int arg;
    es.eigenvalues().minCoeff(&arg);
    return std::pair<double, Vector>{es.eigenvalues()[arg], es.eigenvectors().col(arg)};
  }();
  CHECK(lmin == doctest::Approx(-1.0));
  CHECK(std::abs(vec[1]) == doctest::Approx(1.0));

  // Grid search confirms the analytic minimizers (0, +-1).
  const Vector xm = p.analytic_minimizer();
  CHECK(xm[0] == doctest::Approx(0.0));
  CHECK(xm[1] == doctest::Approx(1.0));
  const double f_min = p.full_value(xm);
  CHECK(f_min == doctest::Approx(*p.meta().f_star));
  double grid_best = 1e9;
  Vector x(2);
  for (double u = -2.0; u <= 2.0; u += 0.01)
    for (double v = -2.0; v <= 2.0; v += 0.01) {
      x << u, v;
      grid_best = std::min(grid_best, p.full_value(x));
    }
  CHECK(grid_best >= f_min - 1e-4);
  CHECK(std::abs(grid_best - f_min) <= 1e-3);
}

TEST_CASE("saddle-quartic suite exposes the requested negative eigenvalue and rho") {
  SuiteOptions opts;
  opts.negative_eig = -1.2;
  opts.quartic_b = 0.15;
  auto p = make_suite("saddle-quartic", 8, 64, 7, opts);
  auto* s = dynamic_cast<const SaddleQuarticProblem*>(p.get());
  REQUIRE(s != nullptr);
  CHECK(s->origin_lambda_min() == doctest::Approx(-1.2).epsilon(1e-9));
  CHECK(*p->meta().rho ==
        doctest::Approx(6.0 * 0.15 * std::sqrt(8.0)));
  REQUIRE(p->meta().f_star.has_value());
  CHECK(*p->meta().f_star == doctest::Approx(-1.2 * 1.2 / (4.0 * 0.15)));
}

TEST_CASE("unknown suite name errors") {
  CHECK_THROWS_AS(make_suite("bogus", 4, 4, 0), std::invalid_argument);
}

TEST_CASE("zeroth-order view blocks gradient access") {
  auto p = testutil::two_component_quadratic();
  ZerothOrderView view(*p);
  CHECK(view.value(0, Vector::Ones(1)) == doctest::Approx(0.5));
  CHECK_THROWS_AS(view.grad(0, Vector::Ones(1)), std::logic_error);
}

TEST_CASE("dimension mismatch is rejected") {
  auto p = testutil::two_component_quadratic();
  CHECK_THROWS_AS(p->full_grad(Vector::Zero(3)), std::invalid_argument);
}
