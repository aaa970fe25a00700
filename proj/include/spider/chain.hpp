#pragma once

#include "spider/problem.hpp"

namespace spider {

/// Gradient-Lipschitz constant of the smoothed chain objective, estimated by
/// dense sampling of the 2-D building blocks (scripts/estimate_hard_instance_l.py).
inline constexpr double kChainGradLipschitz = 269.0;

/// Piecewise bump: 0 for x <= 1/2, exp(1 - 1/(2x-1)^2) above. Derivative is
/// continuous at 1/2 (both sides 0).
double psi(double x);
double psi_prime(double x);

/// sqrt(e) * integral of exp(-t^2/2) from -inf to x, evaluated through the
/// complementary error function for tail stability.
double phi(double x);
double phi_prime(double x);

/// Chain objective on R^K whose gradient reveals at most one new coordinate
/// per evaluation.
double chain_value(const Vector& y);
Vector chain_grad(const Vector& y);

/// Norm clamp rho(x) = x / sqrt(1 + |x|^2 / R^2); preserves direction,
/// |rho| < R always.
Vector norm_clamp(const Vector& x, double R);

/// Smoothed single-block objective chain_value(B^T rho(x)) + |x|^2 / 10.
double smoothed_chain_value(const Vector& x, const Matrix& B, double R);
Vector smoothed_chain_grad(const Vector& x, const Matrix& B, double R);

struct HardInstanceSpec {
  int K = 4;          // chain length
  int n = 2;          // components
  int d = 64;         // ambient dimension, multiple of n with d/n >= n*K
  double eps = 0.1;   // scaling targets
  double L = 1.0;
  double R = 0.0;     // clamp radius; 0 selects the default 230*sqrt(K)
  std::uint64_t seed = 0;

  double clamp_radius() const { return R > 0.0 ? R : 230.0 * std::sqrt(static_cast<double>(K)); }
  double scale_b() const { return kChainGradLipschitz * eps / L; }
  /// Implied initial gap: f(0) - inf f <= Delta by the chain range bound.
  double implied_delta() const {
    return kChainGradLipschitz * std::sqrt(static_cast<double>(n)) * eps * eps / L * 12.0 * K;
  }
};

/// Finite-sum chain benchmark: f_i(x) = a * smoothed_chain(C_i^T x / b) with
/// per-component orthogonal blocks B_i and an orthogonal column partition C.
class HardInstanceProblem : public FiniteSumProblem {
 public:
  explicit HardInstanceProblem(const HardInstanceSpec& spec);

  double value(int i, const Vector& x) const override;
  Vector grad(int i, const Vector& x) const override;

  const HardInstanceSpec& spec() const { return spec_; }
  const Matrix& rotation_block(int i) const { return b_blocks_[i]; }
  const Matrix& partition_block(int i) const { return c_blocks_[i]; }

 private:
  HardInstanceSpec spec_;
  double alpha_;  // l sqrt(n) eps^2 / L
  double b_;      // l eps / L
  double R_;
  std::vector<Matrix> b_blocks_;  // (d/n) x K each, orthonormal columns
  std::vector<Matrix> c_blocks_;  // d x (d/n) slices of one orthogonal matrix
};

std::shared_ptr<HardInstanceProblem> hard_instance(const HardInstanceSpec& spec);

}  // namespace spider
