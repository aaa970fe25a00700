#pragma once

#include <Eigen/Core>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spider/rng.hpp"

namespace spider {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Analytic constants attached to a finite-sum problem. `L` is the
/// mean-square gradient-Lipschitz constant; `sigma` bounds the gradient
/// variance (online mode only); `rho` the Hessian-Lipschitz constant.
/// Declared constants are valid on the box |x_j| <= box_inf when that
/// field is finite.
struct ProblemMeta {
  double L = 0.0;
  std::optional<double> sigma;
  std::optional<double> rho;
  std::optional<double> f_star;
  double box_inf = std::numeric_limits<double>::infinity();
};

/// Oracle bundle for f(x) = (1/n) sum_i f_i(x) over R^d. Immutable after
/// construction; all oracle calls are const and safe under concurrent reads.
class FiniteSumProblem {
 public:
  virtual ~FiniteSumProblem() = default;

  int n() const { return n_; }
  int d() const { return d_; }
  const ProblemMeta& meta() const { return meta_; }

  virtual double value(int i, const Vector& x) const = 0;
  virtual Vector grad(int i, const Vector& x) const = 0;

  virtual bool has_hvp() const { return false; }
  virtual Vector hvp(int /*i*/, const Vector& /*x*/, const Vector& /*u*/) const {
    throw std::logic_error("hvp oracle not available for this problem");
  }

  /// Referee-grade exact averages over all components.
  double full_value(const Vector& x) const;
  Vector full_grad(const Vector& x) const;

  void check_dim(const Vector& x) const {
    if (x.size() != d_)
      throw std::invalid_argument("dimension mismatch: x has " + std::to_string(x.size()) +
                                  " entries, problem expects " + std::to_string(d_));
  }

 protected:
  FiniteSumProblem(int n, int d) : n_(n), d_(d) {}
  int n_;
  int d_;
  ProblemMeta meta_;
};

using ProblemPtr = std::shared_ptr<const FiniteSumProblem>;

/// Value-only view handed to zeroth-order optimizers. Any gradient or
/// Hessian-vector access through it is a contract violation and throws.
class ZerothOrderView {
 public:
  explicit ZerothOrderView(const FiniteSumProblem& p) : p_(p) {}
  int n() const { return p_.n(); }
  int d() const { return p_.d(); }
  double value(int i, const Vector& x) const { return p_.value(i, x); }
  double full_value(const Vector& x) const { return p_.full_value(x); }
  Vector grad(int, const Vector&) const {
    throw std::logic_error("gradient oracle accessed through a zeroth-order view");
  }

 private:
  const FiniteSumProblem& p_;
};

struct GradientCheckReport {
  double max_rel_error = 0.0;
  int worst_component = -1;
  int worst_point = -1;
  std::vector<int> flagged;  // components exceeding tolerance at any point
};

/// Central-difference check of every component gradient at the given points.
GradientCheckReport finite_difference_referee(const FiniteSumProblem& problem,
                                              const std::vector<Vector>& points, double h,
                                              double tol = 1e-5);

/// Empirical gradient-variance bound: sqrt(max over probes of
/// mean_i ||grad_i(x) - full_grad(x)||^2).
double measure_sigma(const FiniteSumProblem& problem, const std::vector<Vector>& probes);

}  // namespace spider
