#!/usr/bin/env python3
"""Estimate the gradient-Lipschitz constant of the chain benchmark.

The chain objective is built from 2-D blocks T(u, v) = Psi(-u) Phi(-v)
- Psi(u) Phi(v) plus a leading -Psi(1) Phi(y_1) term and, in the smoothed
variant, a clamp rho(x) = x / sqrt(1 + |x|^2 / R^2) and a +|x|^2/10 tail.

The full Hessian is block-tridiagonal with one 2x2 block per chain link, so
its spectral norm is at most twice the worst block norm (even/odd coloring)
plus the leading-term curvature. This script scans the 2-D block Hessian on
a dense grid, prints the worst block norm and the resulting constant, which
is stored in the library as kChainGradLipschitz.

Usage: python3 scripts/estimate_hard_instance_l.py [grid_points]
"""
import math
import sys

SQRT_E = math.sqrt(math.e)


def psi(x: float) -> float:
    if x <= 0.5:
        return 0.0
    t = 2.0 * x - 1.0
    return math.exp(1.0 - 1.0 / (t * t))


def psi_p(x: float) -> float:
    if x <= 0.5:
        return 0.0
    t = 2.0 * x - 1.0
    return psi(x) * 4.0 / (t * t * t)


def psi_pp(x: float) -> float:
    if x <= 0.5:
        return 0.0
    t = 2.0 * x - 1.0
    # d/dx [4 Psi / t^3] with dt/dx = 2
    return psi_p(x) * 4.0 / (t ** 3) + psi(x) * (-24.0) / (t ** 4)


def phi(x: float) -> float:
    return SQRT_E * math.sqrt(2.0 * math.pi) * 0.5 * math.erfc(-x / math.sqrt(2.0))


def phi_p(x: float) -> float:
    return SQRT_E * math.exp(-x * x / 2.0)


def phi_pp(x: float) -> float:
    return -x * SQRT_E * math.exp(-x * x / 2.0)


def block_hessian_norm(u: float, v: float) -> float:
    # T(u, v) = Psi(-u) Phi(-v) - Psi(u) Phi(v)
    tuu = psi_pp(-u) * phi(-v) - psi_pp(u) * phi(v)
    tuv = -psi_p(-u) * phi_p(-v) - psi_p(u) * phi_p(v)
    tvv = psi(-u) * phi_pp(-v) - psi(u) * phi_pp(v)
    # spectral norm of symmetric 2x2
    tr = tuu + tvv
    det = tuu * tvv - tuv * tuv
    disc = math.sqrt(max(0.0, tr * tr / 4.0 - det))
    return max(abs(tr / 2.0 + disc), abs(tr / 2.0 - disc))


def main() -> None:
    grid = int(sys.argv[1]) if len(sys.argv) > 1 else 2000
    # Psi' and Psi'' vanish outside |u| <= 3; Phi saturates, so scan v wide.
    worst, at = 0.0, (0.0, 0.0)
    for a in range(grid + 1):
        u = -3.0 + 6.0 * a / grid
        for b in range(grid + 1):
            v = -8.0 + 16.0 * b / grid
            h = block_hessian_norm(u, v)
            if h > worst:
                worst, at = h, (u, v)
    leading = SQRT_E * math.exp(-0.5)  # sup |Psi(1) Phi''| = sqrt(e) e^{-1/2}
    chain = 2.0 * worst + leading
    # Smoothed variant corrections: |J_rho| <= 1, the rho curvature adds at
    # most sup|grad fhat| * 3/R <= ~12 sqrt(K) * 3 / (230 sqrt(K)), and the
    # quadratic tail adds 1/5.
    smoothed = chain + 12.0 * 3.0 / 230.0 + 0.2
    print(f"worst 2-D block Hessian norm : {worst:.6f} at (u, v) = {at}")
    print(f"chain Hessian bound (2h + 1) : {chain:.6f}")
    print(f"smoothed-variant bound       : {smoothed:.6f}")
    print(f"suggested frozen constant    : {math.ceil(smoothed):.1f}")


if __name__ == "__main__":
    main()
