#pragma once

#include "spider/problem.hpp"

namespace spider {

struct SuiteOptions {
  /// Quadratic: share one curvature matrix across components. Required for a
  /// globally valid sigma (component gradients then differ by constants).
  bool uniform_curvature = false;
  /// Quadratic with uniform curvature: rescale the centers so the gradient
  /// variance bound equals exactly this value (0 keeps the raw spread).
  double sigma_target = 0.0;
  /// Quadratic: norm of the mean center, which fixes Delta = f(0) - f*.
  double center_norm = 1.0;
  /// Logistic regularizer weight.
  double lambda = 0.1;
  /// Saddle-quartic: quartic coefficient and the most negative eigenvalue of
  /// the mean Hessian at the origin.
  double quartic_b = 0.15;
  double negative_eig = -1.2;
  /// Saddle-quartic: spread of the zero-mean per-component Hessian noise.
  double hessian_spread = 0.2;
};

/// f_i(x) = 1/2 (x - c_i)^T A_i (x - c_i) with diagonal PSD A_i.
class QuadraticProblem : public FiniteSumProblem {
 public:
  QuadraticProblem(std::vector<Vector> curvatures, std::vector<Vector> centers);

  double value(int i, const Vector& x) const override;
  Vector grad(int i, const Vector& x) const override;
  bool has_hvp() const override { return true; }
  Vector hvp(int i, const Vector& x, const Vector& u) const override;

  const Vector& minimizer() const { return x_star_; }

 private:
  std::vector<Vector> a_;
  std::vector<Vector> c_;
  Vector x_star_;
};

/// f_i(x) = log(1 + exp(-y_i a_i.x)) + lambda sum_j x_j^2 / (1 + x_j^2).
class NonconvexLogisticProblem : public FiniteSumProblem {
 public:
  NonconvexLogisticProblem(Matrix features, std::vector<int> labels, double lambda);

  double value(int i, const Vector& x) const override;
  Vector grad(int i, const Vector& x) const override;
  bool has_hvp() const override { return true; }
  Vector hvp(int i, const Vector& x, const Vector& u) const override;

 private:
  Matrix features_;  // n x d
  std::vector<int> labels_;
  double lambda_;
};

/// f_i(x) = 1/2 x^T H_i x + (b/4) sum_j x_j^4 with mean Hessian having a
/// controlled negative eigenvalue at the origin.
class SaddleQuarticProblem : public FiniteSumProblem {
 public:
  SaddleQuarticProblem(std::vector<Matrix> hessians, double b);

  double value(int i, const Vector& x) const override;
  Vector grad(int i, const Vector& x) const override;
  bool has_hvp() const override { return true; }
  Vector hvp(int i, const Vector& x, const Vector& u) const override;

  const Matrix& mean_hessian() const { return mean_h_; }
  double quartic_b() const { return b_; }
  /// Smallest eigenvalue of the mean Hessian at the origin (stored spectrum).
  double origin_lambda_min() const { return origin_lambda_min_; }
  Vector analytic_minimizer() const;

 private:
  std::vector<Matrix> h_;
  Matrix mean_h_;
  double b_;
  double origin_lambda_min_;
};

/// Named suite factory; name must be one of quadratic, nonconvex-logistic,
/// saddle-quartic.
std::shared_ptr<FiniteSumProblem> make_suite(const std::string& name, int d, int n,
                                             std::uint64_t seed, const SuiteOptions& opts = {});

}  // namespace spider
