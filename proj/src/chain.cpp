#include "spider/chain.hpp"

#include <Eigen/QR>
#include <cmath>

namespace spider {

namespace {
constexpr double kSqrtE = 1.6487212707001281468;
constexpr double kSqrt2Pi = 2.5066282746310005024;
}  // namespace

double psi(double x) {
  if (x <= 0.5) return 0.0;
  const double t = 2.0 * x - 1.0;
  return std::exp(1.0 - 1.0 / (t * t));
}

double psi_prime(double x) {
  if (x <= 0.5) return 0.0;
  const double t = 2.0 * x - 1.0;
  return psi(x) * 4.0 / (t * t * t);
}

double phi(double x) {
  return kSqrtE * kSqrt2Pi * 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double phi_prime(double x) { return kSqrtE * std::exp(-0.5 * x * x); }

double chain_value(const Vector& y) {
  const int K = static_cast<int>(y.size());
  double v = -psi(1.0) * phi(y[0]);
  for (int i = 1; i < K; ++i) v += psi(-y[i - 1]) * phi(-y[i]) - psi(y[i - 1]) * phi(y[i]);
  return v;
}

Vector chain_grad(const Vector& y) {
  const int K = static_cast<int>(y.size());
  Vector g = Vector::Zero(K);
  g[0] = -psi(1.0) * phi_prime(y[0]);
  for (int i = 1; i < K; ++i) {
    // term_i = psi(-y_{i-1}) phi(-y_i) - psi(y_{i-1}) phi(y_i)
    g[i - 1] += -psi_prime(-y[i - 1]) * phi(-y[i]) - psi_prime(y[i - 1]) * phi(y[i]);
    g[i] += -psi(-y[i - 1]) * phi_prime(-y[i]) - psi(y[i - 1]) * phi_prime(y[i]);
  }
  return g;
}

Vector norm_clamp(const Vector& x, double R) {
  return x / std::sqrt(1.0 + x.squaredNorm() / (R * R));
}

double smoothed_chain_value(const Vector& x, const Matrix& B, double R) {
  return chain_value(B.transpose() * norm_clamp(x, R)) + 0.1 * x.squaredNorm();
}

Vector smoothed_chain_grad(const Vector& x, const Matrix& B, double R) {
  const double s = 1.0 / std::sqrt(1.0 + x.squaredNorm() / (R * R));
  const Vector rho = s * x;
  const Vector inner = B * chain_grad(B.transpose() * rho);
  // J_rho = s I - (s^3 / R^2) x x^T, symmetric
  return s * inner - (s * s * s / (R * R)) * x.dot(inner) * x + 0.2 * x;
}

HardInstanceProblem::HardInstanceProblem(const HardInstanceSpec& spec)
    : FiniteSumProblem(spec.n, spec.d), spec_(spec) {
  if (spec.K < 1 || spec.n < 1) throw std::invalid_argument("hard instance: K, n must be >= 1");
  if (spec.d % spec.n != 0)
    throw std::invalid_argument("hard instance: d must be a multiple of n");
  const int m = spec.d / spec.n;
  if (m < spec.n * spec.K)
    throw std::invalid_argument("hard instance: need d/n >= n*K for the orthogonal blocks");

  alpha_ = kChainGradLipschitz * std::sqrt(static_cast<double>(spec.n)) * spec.eps * spec.eps /
           spec.L;
  b_ = spec.scale_b();
  R_ = spec.clamp_radius();

  CounterRng rng(spec.seed);
  auto gaussian = [&rng](int rows, int cols) {
    Matrix g(rows, cols);
    for (int c = 0; c < cols; ++c)
      for (int r = 0; r < rows; ++r) g(r, c) = rng.next_gaussian();
    return g;
  };

  // One (d/n) x (n K) orthonormal frame sliced into per-component B_i.
  Matrix bframe = Eigen::HouseholderQR<Matrix>(gaussian(m, spec.n * spec.K))
                      .householderQ() *
                  Matrix::Identity(m, spec.n * spec.K);
  b_blocks_.reserve(spec.n);
  for (int i = 0; i < spec.n; ++i) b_blocks_.push_back(bframe.middleCols(i * spec.K, spec.K));

  Matrix cframe = Eigen::HouseholderQR<Matrix>(gaussian(spec.d, spec.d)).householderQ();
  c_blocks_.reserve(spec.n);
  for (int i = 0; i < spec.n; ++i) c_blocks_.push_back(cframe.middleCols(i * m, m));

  meta_.L = spec.L;
  // sigma intentionally unset: measured empirically when needed.
}

double HardInstanceProblem::value(int i, const Vector& x) const {
  check_dim(x);
  const Vector z = c_blocks_[i].transpose() * x / b_;
  return alpha_ * smoothed_chain_value(z, b_blocks_[i], R_);
}

Vector HardInstanceProblem::grad(int i, const Vector& x) const {
  check_dim(x);
  const Vector z = c_blocks_[i].transpose() * x / b_;
  // alpha / b = sqrt(n) * eps
  return (alpha_ / b_) * (c_blocks_[i] * smoothed_chain_grad(z, b_blocks_[i], R_));
}

std::shared_ptr<HardInstanceProblem> hard_instance(const HardInstanceSpec& spec) {
  return std::make_shared<HardInstanceProblem>(spec);
}

}  // namespace spider
