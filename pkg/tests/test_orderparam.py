import numpy as np
import pytest

from scarcircuit.exceptions import ConvergenceError, DegenerateFitError
from scarcircuit.orderparam import (
    PerturbationParams,
    absorbing_probability,
    default_fit_window,
    finite_chain_order_parameter,
    finite_chain_profile,
    initial_pair_distribution,
    order_parameter,
    order_parameter_series,
    relaxation_rate,
    walker_pair_step,
)


def test_absorbed_state_is_fixed():
    d = initial_pair_distribution(2)
    d.weights = np.array([1.0])
    out = walker_pair_step(d)
    assert out.weights[0] == 1.0
    assert out.weights[1:].sum() == 0.0


def test_single_site_step_q2():
    out = walker_pair_step(initial_pair_distribution(2))
    assert out.weights[0] == pytest.approx(1 / 3, abs=1e-15)
    assert out.weights[2] == pytest.approx(2 / 3, abs=1e-15)
    assert out.weights.sum() == pytest.approx(1.0, abs=1e-15)


def test_one_step_absorbed_mass_general_q():
    for q in (2, 3, 10):
        out = walker_pair_step(initial_pair_distribution(q))
        assert out.weights[0] == pytest.approx(1 / (q + 1), abs=1e-15)


def test_mass_conserved_and_even_support():
    d = initial_pair_distribution(3)
    for t in range(60):
        d = walker_pair_step(d)
        assert d.weights.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.all(d.weights >= 0)
        # after the first step the support sits on even separations only
        assert d.weights[1::2].sum() == 0.0
    assert d.time == 60


@pytest.mark.parametrize("q", [2, 3])
def test_absorbing_probability_closed_form(q):
    assert abs(absorbing_probability(q) - 1 / q) < 1e-6


def test_absorbing_probability_convergence_error():
    with pytest.raises(ConvergenceError) as err:
        absorbing_probability(2, t_max=3, tol=1e-12)
    assert 0 < err.value.last_value < 0.5


def test_order_parameter_initial_and_scar_values():
    assert order_parameter(PerturbationParams(2, 0.6), 0) == pytest.approx(1 - 0.36)
    series = order_parameter_series(PerturbationParams(2, 0.0), 30)
    assert np.allclose(series, 1.0, atol=1e-15)


def test_order_parameter_one_step_enumeration():
    # walker-pair chain after one layer: absorbed 1/3 contributes 1,
    # separation 2 contributes (1 - lam^2)^2 = 1/4 with weight 2/3
    lam = np.sqrt(0.5)
    val = order_parameter(PerturbationParams(2, lam), 1)
    assert val == pytest.approx(1 / 3 + (2 / 3) * 0.25, abs=1e-12)


@pytest.mark.parametrize("q", [2, 3, 42])
@pytest.mark.parametrize("lam", [0.25, 0.5, 0.75, 1.0])
def test_plateau_reached(q, lam):
    val = order_parameter(PerturbationParams(q, lam), 600)
    assert abs(val - 1 / q) < 1e-4


@pytest.mark.parametrize("lam", [0.05, 0.1, 0.2])
def test_relaxation_rate_small_lambda(lam):
    gamma = relaxation_rate(PerturbationParams(2, lam))
    ref = 2 * (1 / 3) * lam * lam
    assert abs(gamma - ref) / ref < 0.10


def test_relaxation_rate_monotone_in_lambda():
    # regression baseline over the tested grid, not a theorem: the fitted
    # rate grows with lambda and saturates at the band edge
    # -log(4q/(q+1)^2) once the tilt is strong (lam^2 > 1 - 1/sqrt(q))
    lams = [0.05, 0.1, 0.2, 0.4, 0.7, 1.0]
    gammas = []
    for lam in lams:
        p = PerturbationParams(2, lam)
        gammas.append(relaxation_rate(p, t_window=default_fit_window(p)))
    assert all(b >= 0.98 * a for a, b in zip(gammas, gammas[1:]))
    assert gammas[-1] > gammas[2]  # lambda = 1 decays faster than lambda = 0.2


def test_relaxation_rate_degenerate_for_scar():
    with pytest.raises(DegenerateFitError):
        relaxation_rate(PerturbationParams(2, 0.0), t_window=(5, 50))


def test_large_q_deterministic_growth():
    # at large q the pinned region grows two sites per layer; the exact
    # chain tracks (1 - lam^2)^(2t+1) up to O(1/q) and one (1 - lam^2)
    # prefactor (the chain support is even), here within 2%
    q, lam = 100, 0.1
    s = 1 - lam * lam
    series = order_parameter_series(PerturbationParams(q, lam), 8)
    for t in range(1, 9):
        assert abs(series[t] / s ** (2 * t + 1) - 1.0) < 0.02
    # the decay exponent itself matches (1 - lam^2)^2 per layer to 0.5%
    ratios = (series[2:] - 1 / q) / (series[1:-1] - 1 / q)
    assert np.allclose(ratios, s * s, rtol=5e-3)


def test_parameter_validation():
    with pytest.raises(ValueError):
        PerturbationParams(1, 0.5)
    with pytest.raises(ValueError):
        PerturbationParams(2, 1.2)


def test_finite_chain_matches_transfer_before_boundary_contact():
    # insertion at site 4 of L=8: the walker pair cannot reach the edges
    # within three layers, so the open chain agrees with the infinite one
    for t in range(4):
        fin = finite_chain_order_parameter(2, 8, 4, t, 0.5)
        inf_ = order_parameter(PerturbationParams(2, 0.5), t)
        assert fin == pytest.approx(inf_, abs=1e-12)


def test_finite_chain_profile_limits():
    prof = finite_chain_profile(2, 8, 4, 0)
    assert np.allclose(prof[:4], 0.5)  # thermal sites at 1/q
    assert np.allclose(prof[4:], 1.0)  # scar sites
    prof3 = finite_chain_profile(2, 8, 4, 3)
    assert np.all(prof3 >= 0.5 - 1e-12) and np.all(prof3 <= 1.0 + 1e-12)
