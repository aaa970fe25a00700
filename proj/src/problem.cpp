#include "spider/problem.hpp"

#include <algorithm>
#include <cmath>

namespace spider {

double FiniteSumProblem::full_value(const Vector& x) const {
  check_dim(x);
  double acc = 0.0;
  for (int i = 0; i < n_; ++i) acc += value(i, x);
  return acc / n_;
}

Vector FiniteSumProblem::full_grad(const Vector& x) const {
  check_dim(x);
  Vector acc = Vector::Zero(d_);
  for (int i = 0; i < n_; ++i) acc += grad(i, x);
  return acc / n_;
}

GradientCheckReport finite_difference_referee(const FiniteSumProblem& problem,
                                              const std::vector<Vector>& points, double h,
                                              double tol) {
  if (h <= 0.0) throw std::invalid_argument("finite_difference_referee: h must be positive");
  GradientCheckReport report;
  std::vector<bool> flagged(problem.n(), false);
  for (int p = 0; p < static_cast<int>(points.size()); ++p) {
    const Vector& x = points[p];
    problem.check_dim(x);
    for (int i = 0; i < problem.n(); ++i) {
      const Vector g = problem.grad(i, x);
      Vector xp = x;
      double scale = std::max(1.0, g.norm());
      for (int j = 0; j < problem.d(); ++j) {
        const double save = xp[j];
        xp[j] = save + h;
        const double fp = problem.value(i, xp);
        xp[j] = save - h;
        const double fm = problem.value(i, xp);
        xp[j] = save;
        const double fd = (fp - fm) / (2.0 * h);
        const double rel = std::abs(fd - g[j]) / scale;
        if (rel > report.max_rel_error) {
          report.max_rel_error = rel;
          report.worst_component = i;
          report.worst_point = p;
        }
        if (rel > tol) flagged[i] = true;
      }
    }
  }
  for (int i = 0; i < problem.n(); ++i)
    if (flagged[i]) report.flagged.push_back(i);
  return report;
}

double measure_sigma(const FiniteSumProblem& problem, const std::vector<Vector>& probes) {
  double worst = 0.0;
  for (const Vector& x : probes) {
    const Vector g = problem.full_grad(x);
    double acc = 0.0;
    for (int i = 0; i < problem.n(); ++i) acc += (problem.grad(i, x) - g).squaredNorm();
    worst = std::max(worst, acc / problem.n());
  }
  return std::sqrt(worst);
}

}  // namespace spider
