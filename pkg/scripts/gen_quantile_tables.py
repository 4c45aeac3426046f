#!/usr/bin/env python3
"""Regenerate the frozen quantile lookup tables in ``stablepar/_mcculloch.py``.

The quantile-based estimator of the stability index and scale needs, for a
grid of alpha values, two functionals of the *standard* (unit-scale,
symmetric) alpha-stable law:

    nu(alpha) = (q95 - q05) / (q75 - q25) = q95 / q75      (by symmetry)
    c(alpha)  = (q75 - q25) / sigma       = 2 * q75

Quantiles are obtained by inverting the distribution function computed
through characteristic-function inversion (Gil-Pelaez):

    F(x) = 1/2 + (1/pi) * int_0^inf sin(x u) exp(-u^alpha) / u du.

This script is deliberately self-contained (it does not import stablepar)
so the embedded tables are produced by an independent code path.  Known
anchors used as sanity checks:

    nu(2.0) = 2.4388, nu(1.0) = 6.3138 (= tan(0.45 pi)/tan(0.25 pi)),
    c(2.0)  = 1.9079 (= 2 sqrt(2) * Phi^-1(0.75)), c(1.0) = 2 exactly.

Run from the repository root:

    python scripts/gen_quantile_tables.py > src/stablepar/_mcculloch.py
"""

import sys

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

ALPHA_GRID = np.round(np.arange(0.60, 2.0001, 0.05), 10)


def standard_cdf(x: float, alpha: float) -> float:
    """F(x) for the standard symmetric stable law, unit scale."""
    if x == 0.0:
        return 0.5
    sgn, z = (1.0, x) if x > 0 else (-1.0, -x)
    upper = 37.0 ** (1.0 / alpha)  # exp(-37) ~ 8.6e-17: tail negligible

    def integrand(u: float) -> float:
        if u == 0.0:
            return z
        return np.sin(z * u) / u * np.exp(-(u ** alpha))

    val, _ = quad(integrand, 0.0, upper, limit=800, epsabs=1e-12, epsrel=1e-11)
    return 0.5 + sgn * val / np.pi


def standard_quantile(p: float, alpha: float) -> float:
    """Inverse of standard_cdf on (0.5, 1)."""
    lo, hi = 1e-8, 10.0
    while standard_cdf(hi, alpha) < p:
        hi *= 2.0
        if hi > 1e9:
            raise RuntimeError(f"quantile bracket failed: alpha={alpha} p={p}")
    return brentq(lambda x: standard_cdf(x, alpha) - p, lo, hi, xtol=1e-12)


def main() -> None:
    nus, cs = [], []
    for a in ALPHA_GRID:
        q75 = standard_quantile(0.75, a)
        q95 = standard_quantile(0.95, a)
        nus.append(q95 / q75)
        cs.append(2.0 * q75)
        print(f"alpha={a:.2f}  nu={q95 / q75:.6f}  c={2 * q75:.6f}", file=sys.stderr)

    # Anchor checks against closed forms (Gaussian and Cauchy cases).
    gauss = np.searchsorted(ALPHA_GRID, 2.0)
    cauchy = np.searchsorted(ALPHA_GRID, 1.0)
    from scipy.stats import norm

    assert abs(nus[gauss] - norm.ppf(0.95) / norm.ppf(0.75)) < 1e-6
    assert abs(cs[gauss] - 2 * np.sqrt(2) * norm.ppf(0.75)) < 1e-6
    assert abs(nus[cauchy] - np.tan(0.45 * np.pi)) < 1e-6
    assert abs(cs[cauchy] - 2.0) < 1e-6

    fmt = lambda arr: ",\n    ".join(f"{v:.10f}" for v in arr)
    print('"""Frozen quantile lookup tables for the stability-index and scale')
    print("estimator.  Generated by scripts/gen_quantile_tables.py; edit that")
    print('script, not this file."""')
    print()
    print("import numpy as np")
    print()
    print("ALPHA_GRID = np.array([")
    print(f"    {fmt(ALPHA_GRID)},")
    print("])")
    print()
    print("# nu(alpha) = (q95 - q05) / (q75 - q25) of the standard law")
    print("NU_TABLE = np.array([")
    print(f"    {fmt(nus)},")
    print("])")
    print()
    print("# c(alpha) = (q75 - q25) / sigma of the standard law")
    print("C_TABLE = np.array([")
    print(f"    {fmt(cs)},")
    print("])")


if __name__ == "__main__":
    main()
