"""Interface dynamics of the averaged single-copy sector.

After one layer the averaged state of the bipartition protocol is a string
of scar (o) and infinite-temperature (*) sites whose interface performs a
biased random walk: it hops toward the scar region with probability
q/(q+1) and away with probability 1/(q+1), one site per layer.  Positions
increase toward the scar side, so the walk drifts at v > 0 and the
infinite-temperature region invades.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import erf, sqrt

import numpy as np


@dataclass(frozen=True)
class VelocityDiffusion:
    """Growth rates of the interface mean (v) and variance (D), per layer."""

    v: float
    D: float


def velocity_diffusion(q: int) -> VelocityDiffusion:
    """Closed-form drift and diffusion of the interface walk.

    First and second cumulants of the single-step distribution
    (+1 with prob q/(q+1), -1 with prob 1/(q+1)).
    """
    if q < 2:
        raise ValueError(f"local dimension q must be >= 2, got {q}")
    v = (q - 1) / (q + 1)
    d = 4 * q / (q + 1) ** 2
    return VelocityDiffusion(v=v, D=d)


def step_generating_function(q: int, z: float) -> float:
    """log <exp(z * step)> for one layer of the interface walk."""
    return float(np.log((q * np.exp(z) + np.exp(-z)) / (q + 1)))


@dataclass
class InterfaceTrajectory:
    positions: np.ndarray  # position after each layer, starting at 0
    q: int
    seed: int


@dataclass
class InterfaceEnsemble:
    """Sampled interface walks plus endpoint estimators of (v, D)."""

    q: int
    t_max: int
    samples: int
    seed: int
    mean: np.ndarray  # mean position per layer, index 0 = one layer
    var: np.ndarray
    v_fit: float
    v_stderr: float
    D_fit: float
    D_stderr: float
    positions_final: np.ndarray
    snapshots: dict[int, np.ndarray] | None = None


def simulate_interface(
    q: int,
    t_max: int,
    samples: int,
    rng: np.random.Generator,
    seed: int = 0,
    snapshot_times: list[int] | None = None,
) -> InterfaceEnsemble:
    """Sample `samples` interface walks of `t_max` layers.

    The (v, D) estimators use the final-time marginal: v = mean(x_T)/T with
    exact standard error, D = var(x_T)/T with a moment-based error; both are
    unbiased since the steps are iid.
    """
    if t_max < 1:
        raise ValueError(f"t_max must be >= 1, got {t_max}")
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    p_right = q / (q + 1)
    steps = np.where(rng.random((samples, t_max)) < p_right, 1, -1)
    positions = np.cumsum(steps, axis=1)
    snapshots = None
    if snapshot_times:
        snapshots = {
            t: positions[:, t - 1].copy() for t in snapshot_times if 1 <= t <= t_max
        }
    mean = positions.mean(axis=0)
    var = positions.var(axis=0, ddof=1) if samples > 1 else np.zeros(t_max)
    final = positions[:, -1].astype(float)
    v_fit = float(final.mean() / t_max)
    v_se = float(final.std(ddof=1) / sqrt(samples) / t_max) if samples > 1 else 0.0
    centered = final - final.mean()
    m2 = float(np.mean(centered**2))
    m4 = float(np.mean(centered**4))
    d_fit = float(var[-1] / t_max)
    d_se = float(sqrt(max(m4 - m2 * m2, 0.0) / samples) / t_max) if samples > 1 else 0.0
    return InterfaceEnsemble(
        q=q,
        t_max=t_max,
        samples=samples,
        seed=seed,
        mean=mean,
        var=var,
        v_fit=v_fit,
        v_stderr=v_se,
        D_fit=d_fit,
        D_stderr=d_se,
        positions_final=positions[:, -1],
        snapshots=snapshots,
    )


def _normal_cdf(z: float) -> float:
    return 0.5 * (1.0 + erf(z / sqrt(2.0)))


def analytic_profile(
    x: float, t: float, q: int, value_scar: float, value_inf: float
) -> float:
    """Gaussian interface profile of a local observable.

    F((x - v t)/sqrt(D t)) * value_scar + (1 - F) * value_inf with F the
    standard normal cumulative function; x -> -inf gives the
    infinite-temperature value, x = v t the midpoint.
    """
    if t <= 0:
        raise ValueError(f"profile requires t > 0, got t={t}")
    vd = velocity_diffusion(q)
    f = _normal_cdf((x - vd.v * t) / sqrt(vd.D * t))
    return f * value_scar + (1.0 - f) * value_inf
