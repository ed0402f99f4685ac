import math

import numpy as np
import pytest

from scarcircuit.analytics import (
    critical_lambda,
    otoc_plateau,
    page_curve,
    purity_saturation,
    purity_saturation_asymptote,
    purity_saturation_entropy_density,
)
from scarcircuit.haar import build_scar_gate
from scarcircuit.rng import stream


def test_page_curve_values():
    # -2 log(0.96) binds at small lambda
    assert page_curve(2, 0.2, 0.5) == pytest.approx(-2 * math.log(0.96), abs=1e-12)
    assert page_curve(2, 0.2, 0.5) == pytest.approx(0.0816, abs=5e-5)
    assert page_curve(2, 0.0, 0.3) == 0.0
    assert page_curve(2, 1.0, 0.5) == pytest.approx(0.5 * math.log(2), abs=1e-12)
    # geometric branches at the edges
    assert page_curve(2, 1.0, 0.0) == 0.0
    assert page_curve(2, 1.0, 1.0) == 0.0
    # second branch binds at lam = 0.6: -2log(0.64) ~ 0.8926 > (1/2) log 2
    assert page_curve(2, 0.6, 0.5) == pytest.approx(0.34657359028, abs=1e-10)


def test_critical_lambda():
    assert critical_lambda(2) == pytest.approx(0.3989, abs=1e-4)
    assert critical_lambda(10**12) == pytest.approx(1.0, abs=1e-3)
    lam = critical_lambda(2)
    # branch equality at the transition
    assert -2 * math.log(1 - lam * lam) == pytest.approx(
        0.5 * math.log(2), abs=1e-12
    )


def test_otoc_plateau_values():
    p2 = otoc_plateau(2)
    assert p2.plateau == pytest.approx(3 / 16, abs=1e-15)
    assert otoc_plateau(3).plateau == pytest.approx(5 / 81, abs=1e-15)
    # algebra of the free-independence reduction
    var = p2.centered_variance
    assert var == pytest.approx(1 / 2 - 1 / 4, abs=1e-15)
    assert p2.commutator_limit == pytest.approx(-2 * var * var, abs=1e-15)
    assert -(var * var) + 0.25 == pytest.approx((2 * 2 - 1) / 2**4, abs=1e-15)


def test_purity_saturation_scar_is_exact():
    assert purity_saturation(2, 10, 5, 0.0) == pytest.approx(1.0, abs=1e-15)
    assert purity_saturation(3, 6, 3, 0.0) == pytest.approx(1.0, abs=1e-15)


def test_purity_saturation_matches_asymptote():
    for lam in (0.3, 0.6, 0.9):
        exact = purity_saturation_entropy_density(2, 40, 20, lam)
        asym = purity_saturation_asymptote(2, 40, 20, lam)
        assert exact == pytest.approx(-math.log(asym) / 40, rel=1e-5)


def test_purity_saturation_exact_value_at_L40():
    # frozen from the exact rational contraction; the dominant term is
    # (d + d')/dd' = 2^-19, so the entropy density sits 2/L below the
    # thermodynamic value (1/2) log 2
    pur = purity_saturation(2, 40, 20, 0.6)
    assert pur == pytest.approx(1.9073486331228753e-06, rel=1e-12)
    dens = purity_saturation_entropy_density(2, 40, 20, 0.6)
    assert dens == pytest.approx(0.3292449107619059, abs=1e-12)
    target = page_curve(2, 0.6, 0.5)
    assert abs(dens - target) / target == pytest.approx(2 / 40, abs=1e-6)


def test_entropy_density_converges_like_two_over_L():
    target = page_curve(2, 0.6, 0.5)
    devs = [
        abs(purity_saturation_entropy_density(2, L, L // 2, 0.6) - target) / target
        for L in (40, 80, 160, 320)
    ]
    for a, b in zip(devs, devs[1:]):
        assert b < 0.6 * a  # halves with doubling L
    assert devs[-1] < 0.01  # within 1% by L = 320


def test_small_d_matches_block_random_matrix_monte_carlo():
    # d = d' = q: one sampled gate applied to the two-site tilted state
    q, lam, n = 2, 0.5, 20_000
    exact = purity_saturation(q, 2, 1, lam)
    rng = stream(71)
    psi1 = np.array([math.sqrt(1 - lam * lam), lam], dtype=complex)
    psi = np.kron(psi1, psi1)
    vals = np.empty(n)
    for i in range(n):
        out = build_scar_gate(q, rng) @ psi
        m = out.reshape(q, q)
        g = m @ m.conj().T
        vals[i] = np.vdot(g, g).real
    se = vals.std(ddof=1) / math.sqrt(n)
    assert abs(vals.mean() - exact) < 5 * se


def test_argument_validation():
    with pytest.raises(ValueError):
        page_curve(1, 0.5, 0.5)
    with pytest.raises(ValueError):
        page_curve(2, 0.5, 1.5)
    with pytest.raises(ValueError):
        purity_saturation(2, 4, 0, 0.5)
    with pytest.raises(ValueError):
        purity_saturation(2, 4, 4, 0.5)
    with pytest.raises(ValueError):
        critical_lambda(1)
