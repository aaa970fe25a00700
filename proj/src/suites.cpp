#include "spider/suites.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace spider {

namespace {

Vector gaussian_vector(CounterRng& rng, int d) {
  Vector v(d);
  for (int j = 0; j < d; ++j) v[j] = rng.next_gaussian();
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// QuadraticProblem

QuadraticProblem::QuadraticProblem(std::vector<Vector> curvatures, std::vector<Vector> centers)
    : FiniteSumProblem(static_cast<int>(curvatures.size()),
                       static_cast<int>(curvatures.empty() ? 0 : curvatures[0].size())),
      a_(std::move(curvatures)),
      c_(std::move(centers)) {
  if (a_.size() != c_.size() || a_.empty())
    throw std::invalid_argument("quadratic: need matching non-empty curvature/center lists");
  for (const auto& a : a_)
    if (a.minCoeff() < 0.0) throw std::invalid_argument("quadratic: curvatures must be PSD");

  // L^2 = max_j mean_i a_ij^2 (mean-square gradient-Lipschitz, exact for
  // diagonal curvature).
  Vector mean_sq = Vector::Zero(d_);
  Vector mean_a = Vector::Zero(d_);
  Vector mean_ac = Vector::Zero(d_);
  for (int i = 0; i < n_; ++i) {
    mean_sq += a_[i].cwiseProduct(a_[i]);
    mean_a += a_[i];
    mean_ac += a_[i].cwiseProduct(c_[i]);
  }
  mean_sq /= n_;
  mean_a /= n_;
  mean_ac /= n_;
  meta_.L = std::sqrt(mean_sq.maxCoeff());
  x_star_ = mean_ac.cwiseQuotient(mean_a);

  double fs = 0.0;
  for (int i = 0; i < n_; ++i) fs += value(i, x_star_);
  meta_.f_star = fs / n_;
  meta_.rho = 0.0;  // constant Hessians

  // With a shared curvature matrix the component gradients differ from the
  // mean by the constant A(c_i - c_bar), so the variance bound is global.
  bool uniform = true;
  for (int i = 1; i < n_ && uniform; ++i) uniform = (a_[i] - a_[0]).norm() == 0.0;
  if (uniform) {
    Vector c_bar = Vector::Zero(d_);
    for (const auto& c : c_) c_bar += c;
    c_bar /= n_;
    double var = 0.0;
    for (const auto& c : c_) var += a_[0].cwiseProduct(c - c_bar).squaredNorm();
    meta_.sigma = std::sqrt(var / n_);
  }
}

double QuadraticProblem::value(int i, const Vector& x) const {
  const Vector r = x - c_[i];
  return 0.5 * r.cwiseProduct(r).dot(a_[i]);
}

Vector QuadraticProblem::grad(int i, const Vector& x) const {
  return a_[i].cwiseProduct(x - c_[i]);
}

Vector QuadraticProblem::hvp(int i, const Vector&, const Vector& u) const {
  return a_[i].cwiseProduct(u);
}

// ---------------------------------------------------------------------------
// NonconvexLogisticProblem

namespace {
double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

// sup over x of |d^3/dx^3 [x^2/(1+x^2)]| = |24 x (x^2-1) / (1+x^2)^4|,
// attained near |x| = 0.38; evaluated once on a fine grid.
double regularizer_third_derivative_sup() {
  double sup = 0.0;
  for (int k = 0; k <= 4000; ++k) {
    const double x = -2.0 + 4.0 * k / 4000.0;
    const double denom = std::pow(1.0 + x * x, 4);
    sup = std::max(sup, std::abs(24.0 * x * (x * x - 1.0)) / denom);
  }
  return sup;
}
}  // namespace

NonconvexLogisticProblem::NonconvexLogisticProblem(Matrix features, std::vector<int> labels,
                                                   double lambda)
    : FiniteSumProblem(static_cast<int>(features.rows()), static_cast<int>(features.cols())),
      features_(std::move(features)),
      labels_(std::move(labels)),
      lambda_(lambda) {
  if (static_cast<int>(labels_.size()) != n_)
    throw std::invalid_argument("logistic: label count mismatch");
  double mean_l2 = 0.0, max_norm = 0.0, max_norm3 = 0.0;
  for (int i = 0; i < n_; ++i) {
    const double nm = features_.row(i).norm();
    const double li = 0.25 * nm * nm + 2.0 * lambda_;
    mean_l2 += li * li;
    max_norm = std::max(max_norm, nm);
    max_norm3 = std::max(max_norm3, nm * nm * nm);
  }
  meta_.L = std::sqrt(mean_l2 / n_);
  meta_.sigma = 2.0 * max_norm;  // logistic gradients are a_i-bounded; the
                                 // regularizer is identical across components
  const double sig2_sup = 1.0 / (6.0 * std::sqrt(3.0));  // max |sigmoid''|
  meta_.rho = max_norm3 * sig2_sup + lambda_ * regularizer_third_derivative_sup();
}

double NonconvexLogisticProblem::value(int i, const Vector& x) const {
  const double m = -labels_[i] * features_.row(i).dot(x);
  // log(1+exp(m)) computed stably
  const double loss = m > 0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
  double reg = 0.0;
  for (int j = 0; j < d_; ++j) reg += x[j] * x[j] / (1.0 + x[j] * x[j]);
  return loss + lambda_ * reg;
}

Vector NonconvexLogisticProblem::grad(int i, const Vector& x) const {
  const double m = -labels_[i] * features_.row(i).dot(x);
  Vector g = (-labels_[i] * sigmoid(m)) * features_.row(i).transpose();
  for (int j = 0; j < d_; ++j) {
    const double den = 1.0 + x[j] * x[j];
    g[j] += lambda_ * 2.0 * x[j] / (den * den);
  }
  return g;
}

Vector NonconvexLogisticProblem::hvp(int i, const Vector& x, const Vector& u) const {
  const double m = -labels_[i] * features_.row(i).dot(x);
  const double s = sigmoid(m);
  const double w = s * (1.0 - s);  // logistic curvature, label sign squares away
  Vector h = w * features_.row(i).dot(u) * features_.row(i).transpose();
  for (int j = 0; j < d_; ++j) {
    const double x2 = x[j] * x[j];
    const double den = 1.0 + x2;
    h[j] += lambda_ * 2.0 * (1.0 - 3.0 * x2) / (den * den * den) * u[j];
  }
  return h;
}

// ---------------------------------------------------------------------------
// SaddleQuarticProblem

SaddleQuarticProblem::SaddleQuarticProblem(std::vector<Matrix> hessians, double b)
    : FiniteSumProblem(static_cast<int>(hessians.size()),
                       static_cast<int>(hessians.empty() ? 0 : hessians[0].rows())),
      h_(std::move(hessians)),
      b_(b) {
  if (h_.empty() || b_ <= 0.0) throw std::invalid_argument("saddle-quartic: bad construction");
  mean_h_ = Matrix::Zero(d_, d_);
  for (const auto& h : h_) mean_h_ += h;
  mean_h_ /= n_;
  Eigen::SelfAdjointEigenSolver<Matrix> es(mean_h_);
  origin_lambda_min_ = es.eigenvalues().minCoeff();

  // Declared constants hold on the box |x_j| <= sqrt(d); rho = 6 b sqrt(d).
  meta_.box_inf = std::sqrt(static_cast<double>(d_));
  meta_.rho = 6.0 * b_ * meta_.box_inf;
  double max_h = 0.0, var = 0.0;
  for (const auto& h : h_) {
    Eigen::SelfAdjointEigenSolver<Matrix> esi(h);
    max_h = std::max(max_h, esi.eigenvalues().cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Matrix> esd(Matrix(h - mean_h_));
    var = std::max(var, esd.eigenvalues().cwiseAbs().maxCoeff());
  }
  meta_.L = max_h + 3.0 * b_ * meta_.box_inf * meta_.box_inf;
  // ||grad_i - grad|| = ||(H_i - H_bar) x|| <= spread * ||x|| on the box.
  meta_.sigma = var * meta_.box_inf * std::sqrt(static_cast<double>(d_));

  // Exact infimum for the diagonal-mean construction: coordinates with
  // negative mean curvature sit at +-sqrt(-h/b). Only valid when the mean
  // Hessian is diagonal; otherwise leave f_star unset.
  bool diagonal = true;
  for (int r = 0; r < d_ && diagonal; ++r)
    for (int c = 0; c < d_ && diagonal; ++c)
      if (r != c && std::abs(mean_h_(r, c)) > 1e-14) diagonal = false;
  if (diagonal) {
    double fs = 0.0;
    for (int j = 0; j < d_; ++j) {
      const double hj = mean_h_(j, j);
      if (hj < 0.0) fs += -hj * hj / (4.0 * b_);
    }
    meta_.f_star = fs;
  }
}

Vector SaddleQuarticProblem::analytic_minimizer() const {
  Vector x = Vector::Zero(d_);
  for (int j = 0; j < d_; ++j) {
    const double hj = mean_h_(j, j);
    if (hj < 0.0) x[j] = std::sqrt(-hj / b_);
  }
  return x;
}

double SaddleQuarticProblem::value(int i, const Vector& x) const {
  double quart = 0.0;
  for (int j = 0; j < d_; ++j) quart += x[j] * x[j] * x[j] * x[j];
  return 0.5 * x.dot(h_[i] * x) + 0.25 * b_ * quart;
}

Vector SaddleQuarticProblem::grad(int i, const Vector& x) const {
  Vector g = h_[i] * x;
  for (int j = 0; j < d_; ++j) g[j] += b_ * x[j] * x[j] * x[j];
  return g;
}

Vector SaddleQuarticProblem::hvp(int i, const Vector& x, const Vector& u) const {
  Vector h = h_[i] * u;
  for (int j = 0; j < d_; ++j) h[j] += 3.0 * b_ * x[j] * x[j] * u[j];
  return h;
}

// ---------------------------------------------------------------------------
// Suite factory

std::shared_ptr<FiniteSumProblem> make_suite(const std::string& name, int d, int n,
                                             std::uint64_t seed, const SuiteOptions& opts) {
  CounterRng rng(seed);
  if (name == "quadratic") {
    std::vector<Vector> a(n), c(n);
    Vector shared = Vector::Ones(d);
    for (int i = 0; i < n; ++i) {
      if (opts.uniform_curvature) {
        a[i] = shared;
      } else {
        a[i] = Vector(d);
        for (int j = 0; j < d; ++j) a[i][j] = 0.5 + rng.next_double();
      }
      c[i] = gaussian_vector(rng, d);
    }
    Vector c_bar = Vector::Zero(d);
    for (const auto& ci : c) c_bar += ci;
    c_bar /= n;
    if (opts.uniform_curvature && opts.sigma_target > 0.0) {
      double var = 0.0;
      for (const auto& ci : c) var += (ci - c_bar).squaredNorm();
      const double scale = opts.sigma_target / std::sqrt(var / n);
      for (auto& ci : c) ci = c_bar + scale * (ci - c_bar);
    }
    // Place the mean center at distance center_norm from the origin so that
    // Delta = f(0) - f* is controlled for x0 = 0.
    Vector shift = Vector::Zero(d);
    shift[0] = opts.center_norm;
    for (auto& ci : c) ci += shift - c_bar;
    return std::make_shared<QuadraticProblem>(std::move(a), std::move(c));
  }
  if (name == "nonconvex-logistic") {
    Matrix feats(n, d);
    Vector w_true = gaussian_vector(rng, d).normalized();
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) {
      Vector row = gaussian_vector(rng, d) / std::sqrt(static_cast<double>(d));
      feats.row(i) = row;
      const double margin = row.dot(w_true) + 0.1 * rng.next_gaussian();
      labels[i] = margin >= 0.0 ? 1 : -1;
    }
    return std::make_shared<NonconvexLogisticProblem>(std::move(feats), std::move(labels),
                                                      opts.lambda);
  }
  if (name == "saddle-quartic") {
    Matrix mean = Matrix::Zero(d, d);
    mean(0, 0) = opts.negative_eig;
    for (int j = 1; j < d; ++j) mean(j, j) = 0.5 + 0.5 * rng.next_double();
    std::vector<Matrix> hs(n);
    Matrix noise_mean = Matrix::Zero(d, d);
    for (int i = 0; i < n; ++i) {
      Matrix e(d, d);
      for (int r = 0; r < d; ++r)
        for (int col = r; col < d; ++col) {
          const double v = opts.hessian_spread * rng.next_gaussian();
          e(r, col) = v;
          e(col, r) = v;
        }
      hs[i] = e;
      noise_mean += e;
    }
    noise_mean /= n;
    for (int i = 0; i < n; ++i) hs[i] = mean + (hs[i] - noise_mean);
    return std::make_shared<SaddleQuarticProblem>(std::move(hs), opts.quartic_b);
  }
  throw std::invalid_argument("unknown suite name: " + name);
}

}  // namespace spider
