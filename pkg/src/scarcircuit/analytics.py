"""Closed-form entanglement and scrambling predictions.

The late-time entropy is obtained by replacing the brickwork circuit with a
single huge block-structured unitary (identity on the global scar, Haar on
the complement) acting on C^d x C^d', d = q^ell, d' = q^(L-ell).  The
two-copy contraction then reduces to the seven-dimensional site basis with
the Gram matrix evaluated at the subsystem dimensions.  The contraction is
done in exact rational arithmetic: its terms span many orders of magnitude
and float cancellation would destroy the tiny results.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import inf, log, sqrt

import numpy as np

from .exceptions import DegenerateBasisError
from .gram import GRAM_EXPONENTS

BASIS = 7


def page_curve(q: int, lam: float, ell_over_l: float) -> float:
    """Entropy density min{-2 log(1 - lam^2), (l/L) log q, (1 - l/L) log q}.

    The first branch is the scar-overlap branch; at lam = 1 it is +inf and
    the geometric branches always bind.
    """
    if q < 2:
        raise ValueError(f"local dimension q must be >= 2, got {q}")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    if not 0.0 <= ell_over_l <= 1.0:
        raise ValueError(f"ell/L must lie in [0, 1], got {ell_over_l}")
    s = 1.0 - lam * lam
    scar_branch = inf if s == 0.0 else -2.0 * log(s)
    return min(scar_branch, ell_over_l * log(q), (1.0 - ell_over_l) * log(q))


def critical_lambda(q: int) -> float:
    """Perturbation strength where the scar branch meets the geometric one
    at half chain: sqrt(1 - q^(-1/4))."""
    if q < 2:
        raise ValueError(f"local dimension q must be >= 2, got {q}")
    return sqrt(1.0 - q ** (-0.25))


@dataclass(frozen=True)
class OtocPlateau:
    """Late-time OTOC of the local projector under free independence.

    ``commutator_limit`` is the late-time squared commutator
    -2 <(O - <O>)^2>^2 and ``plateau`` the correlator limit
    -<(O - <O>)^2>^2 + <O^2>^2, both evaluated with <O> = <O^2> = 1/q.
    """

    q: int
    plateau: float
    commutator_limit: float
    centered_variance: float


def otoc_plateau(q: int) -> OtocPlateau:
    if q < 2:
        raise ValueError(f"local dimension q must be >= 2, got {q}")
    mean = 1.0 / q
    var = mean - mean * mean  # <O^2> - <O>^2 with O a projector
    plateau = -(var * var) + mean * mean
    assert abs(plateau - (2 * q - 1) / q**4) < 1e-15
    return OtocPlateau(
        q=q,
        plateau=plateau,
        commutator_limit=-2.0 * var * var,
        centered_variance=var,
    )


def _gram_fraction(d: int) -> list[list[Fraction]]:
    return [
        [Fraction(d) ** int(GRAM_EXPONENTS[i, j]) for j in range(BASIS)]
        for i in range(BASIS)
    ]


def _solve_fraction(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Exact Gaussian elimination with partial pivoting on nonzero entries."""
    n = len(a)
    m = [row[:] + [b[i]] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise DegenerateBasisError(
                "subsystem-dimension Gram system is singular"
            )
        m[col], m[pivot] = m[pivot], m[col]
        pv = m[col][col]
        m[col] = [x / pv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def _log_fraction(x: Fraction) -> float:
    """log of a positive rational, safe against float overflow/underflow."""
    num, den = x.numerator, x.denominator
    shift = num.bit_length() - den.bit_length()
    if shift >= 0:
        scaled = Fraction(num, den << shift)
    else:
        scaled = Fraction(num << -shift, den)
    return log(float(scaled)) + shift * log(2.0)


def _purity_fraction(q: int, L: int, ell: int, lam: float) -> Fraction:
    if q < 2:
        raise ValueError(f"local dimension q must be >= 2, got {q}")
    if not 1 <= ell <= L - 1:
        raise ValueError(f"ell must lie in 1..L-1, got ell={ell}, L={L}")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    d = q**ell
    dp = q ** (L - ell)
    gd = _gram_fraction(d)
    gdp = _gram_fraction(dp)
    a = [[gd[i][j] * gdp[i][j] for j in range(BASIS)] for i in range(BASIS)]
    s = 1 - Fraction(lam) ** 2  # exact on the binary float value of lam
    v_d = [s ** (2 * ell), 1, s**ell, s**ell, 1, s**ell, s**ell]
    nr = L - ell
    v_dp = [s ** (2 * nr), 1, s**nr, s**nr, 1, s**nr, s**nr]
    w = [Fraction(x) * Fraction(y) for x, y in zip(v_d, v_dp)]
    x = _solve_fraction(a, w)
    meas = [gd[j][4] * gdp[j][1] for j in range(BASIS)]
    purity = sum(m * xi for m, xi in zip(meas, x))
    if purity <= 0:
        raise DegenerateBasisError("nonpositive purity from exact contraction")
    return purity


def purity_saturation(q: int, L: int, ell: int, lam: float) -> float:
    """Averaged purity of region size `ell` after one huge scar-block gate.

    Exact seven-term contraction: solve (G(d) * G(d')) x = v(d) v(d')
    elementwise and contract with the swap/identity measurement overlaps
    G_j4(d) G_j1(d').  For large d, d' this reproduces
    (dd')^(-2-2Gam) ((dd')^2 + (dd')^(2Gam+1)(d + d')) with
    q^(-Gam) = 1 - lam^2.
    """
    return float(_purity_fraction(q, L, ell, lam))


def purity_saturation_entropy_density(q: int, L: int, ell: int, lam: float) -> float:
    """-log(purity)/L with the log taken in exact arithmetic (safe for large L)."""
    return -_log_fraction(_purity_fraction(q, L, ell, lam)) / L


def purity_saturation_asymptote(q: int, L: int, ell: int, lam: float) -> float:
    """Large-dimension form of the saturated purity (binding contract)."""
    s = 1.0 - lam * lam
    gamma = 0.0 if s == 1.0 else -log(s) / log(q)
    dd = float(q) ** L
    d_sum = float(q) ** ell + float(q) ** (L - ell)
    return dd ** (-2 - 2 * gamma) * (dd**2 + dd ** (2 * gamma + 1) * d_sum)
