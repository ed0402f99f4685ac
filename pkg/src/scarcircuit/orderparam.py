"""Order-parameter relaxation from the walker-pair transfer chain.

In the operator picture, the local projector |0><0| inserted into an
identity background spawns a region of scar-pinned sites bounded by two
walkers.  The distance x between the walkers evolves under the transfer
operator

    |0) -> |0)
    |1) -> q/(q+1) |2) + 1/(q+1) |0)
    |x) -> q^2/(q+1)^2 |x+2) + 2q/(q+1)^2 |x) + 1/(q+1)^2 |x-2)   (x >= 2),

with x = 0 absorbing (the pair annihilates into the identity string).  The
order parameter is the exact weighted sum <O(t)> = sum_x P_t(x) (1-l^2)^x;
the annihilated state contributes (1-l^2)^0 = 1.  Support truncation at
x <= 2t + 2 is the exact light cone, not an approximation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ConvergenceError, DegenerateFitError


@dataclass(frozen=True)
class PerturbationParams:
    """Local dimension q and global perturbation strength lambda in [0, 1]."""

    q: int
    lam: float

    def __post_init__(self):
        if self.q < 2:
            raise ValueError(f"local dimension q must be >= 2, got {self.q}")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam}")


@dataclass
class WalkerDistribution:
    """Probability table over walker separations at a given layer count.

    ``weights[x]`` is the probability of separation x; entries beyond the
    light cone are exactly zero.
    """

    q: int
    weights: np.ndarray
    time: int

    def mass_at_zero(self) -> float:
        return float(self.weights[0])

    def check_normalized(self, tol: float = 1e-12) -> bool:
        return abs(float(self.weights.sum()) - 1.0) <= tol and bool(
            np.all(self.weights >= -tol)
        )


def initial_pair_distribution(q: int) -> WalkerDistribution:
    """Point mass at separation 1 (a single inserted site)."""
    w = np.zeros(2)
    w[1] = 1.0
    return WalkerDistribution(q=q, weights=w, time=0)


def walker_pair_step(dist: WalkerDistribution) -> WalkerDistribution:
    """One application of the transfer operator; x = 0 stays absorbed."""
    q = dist.q
    w = dist.weights
    n = len(w)
    out = np.zeros(n + 2)
    out[0] = w[0]
    if n > 1:
        out[0] += w[1] / (q + 1)
        out[2] += w[1] * q / (q + 1)
    if n > 2:
        bulk = w[2:]
        p_up = q * q / (q + 1) ** 2
        p_stay = 2 * q / (q + 1) ** 2
        p_down = 1 / (q + 1) ** 2
        out[4 : n + 2] += p_up * bulk
        out[2:n] += p_stay * bulk
        out[0 : n - 2] += p_down * bulk
    return WalkerDistribution(q=q, weights=out, time=dist.time + 1)


def absorbing_probability(q: int, t_max: int = 100_000, tol: float = 1e-9) -> float:
    """Total mass absorbed at x = 0 starting from separation 1.

    Iterates until the remaining-absorption bound rho/(1-rho) * increment
    falls below tol (rho = 4q/(q+1)^2 bounds the per-step decay of the
    absorption flux), so the returned value is within tol of the limit.
    """
    if q < 2:
        raise ValueError(f"local dimension q must be >= 2, got {q}")
    if t_max < 1:
        raise ValueError(f"t_max must be >= 1, got {t_max}")
    rho = 4 * q / (q + 1) ** 2
    tail_factor = rho / (1 - rho)
    dist = initial_pair_distribution(q)
    prev = dist.mass_at_zero()
    for _ in range(t_max):
        dist = walker_pair_step(dist)
        cur = dist.mass_at_zero()
        inc = cur - prev
        prev = cur
        if inc * tail_factor < tol and dist.time > 1:
            return cur
    raise ConvergenceError(
        f"absorption mass did not settle within {t_max} steps (last increment "
        f"bound {inc * tail_factor:.3e} > tol {tol:.3e})",
        last_value=prev,
    )


def order_parameter_series(params: PerturbationParams, t_max: int) -> np.ndarray:
    """<O(t)> for t = 0 .. t_max from the exact transfer chain."""
    if t_max < 0:
        raise ValueError(f"t_max must be >= 0, got {t_max}")
    s = 1.0 - params.lam**2
    dist = initial_pair_distribution(params.q)
    values = np.empty(t_max + 1)
    values[0] = s  # single inserted site
    for t in range(1, t_max + 1):
        dist = walker_pair_step(dist)
        x = np.arange(len(dist.weights))
        values[t] = float(np.dot(dist.weights, s**x))
    return values


def order_parameter(params: PerturbationParams, t: int) -> float:
    """Exact order parameter after t layers."""
    return float(order_parameter_series(params, t)[t])


def _auto_fit_window(series: np.ndarray, plateau: float, gamma_guess: float):
    """Start once |<O> - 1/q| has halved relative to its t=1 value (skips
    transients), span a few predicted decay times."""
    ref = abs(series[1] - plateau) if len(series) > 1 else 0.0
    start = next(
        (t for t in range(1, len(series)) if abs(series[t] - plateau) <= 0.5 * ref),
        len(series) // 2,
    )
    end = min(len(series) - 1, start + max(int(3.0 / max(gamma_guess, 1e-6)), 20))
    return start, end


def _fit_log_excess(series: np.ndarray, plateau: float, window: tuple[int, int]):
    """Least squares on log|<O(t)> - 1/q|; returns (gamma, C) with the sign
    of C carrying the approach direction.

    The excess is positive for weak tilts and negative once the initial
    value starts below the plateau (lam^2 > 1 - 1/q); a sign change or an
    excess at machine precision inside the window is a degenerate fit.
    """
    start, end = window
    if not 0 <= start < end <= len(series) - 1:
        raise ValueError(f"bad fit window {window}")
    excess = series[start : end + 1] - plateau
    mags = np.abs(excess)
    if mags.max() < 1e-13:
        raise DegenerateFitError(
            f"series is at the plateau within machine precision on window {window}"
        )
    signs = np.sign(excess)
    if mags.min() < 1e-300 or not np.all(signs == signs[0]):
        raise DegenerateFitError(
            f"excess changes sign inside the fit window {window}"
        )
    if mags.max() / mags.min() < 1.0 + 1e-10:
        raise DegenerateFitError(f"series does not relax on window {window}")
    ts = np.arange(start, end + 1, dtype=float)
    slope, intercept = np.polyfit(ts, np.log(mags), 1)
    return float(-slope), float(signs[0] * np.exp(intercept))


def relaxation_rate(
    params: PerturbationParams,
    t_window: tuple[int, int] | None = None,
    t_max: int | None = None,
) -> float:
    """Exponential relaxation rate gamma of <O(t)> toward 1/q.

    With no explicit window, the fit starts once the plateau excess has
    halved and spans roughly three decay times of the small-lambda
    prediction 2 v lambda^2.
    """
    q, lam = params.q, params.lam
    plateau = 1.0 / q
    v = (q - 1) / (q + 1)
    gamma_guess = max(2 * v * lam * lam, 1e-4)
    if t_window is None:
        horizon = t_max if t_max is not None else int(6.0 / gamma_guess) + 50
        series = order_parameter_series(params, horizon)
        t_window = _auto_fit_window(series, plateau, gamma_guess)
    else:
        series = order_parameter_series(params, t_window[1])
    return _fit_log_excess(series, plateau, t_window)[0]


def fit_exponential_tail(
    params: PerturbationParams, t_window: tuple[int, int]
) -> tuple[float, float]:
    """(gamma, C) of the fit <O(t)> = 1/q + C exp(-gamma t) on the window."""
    series = order_parameter_series(params, t_window[1])
    return _fit_log_excess(series, 1.0 / params.q, t_window)


def default_fit_window(params: PerturbationParams) -> tuple[int, int]:
    """The automatic window used by `relaxation_rate` when none is given."""
    q, lam = params.q, params.lam
    v = (q - 1) / (q + 1)
    gamma_guess = max(2 * v * lam * lam, 1e-4)
    horizon = int(6.0 / gamma_guess) + 50
    series = order_parameter_series(params, horizon)
    return _auto_fit_window(series, 1.0 / q, gamma_guess)


# ---------------------------------------------------------------------------
# Exact open-chain reference dynamics (finite L, same brickwork as the oracle)


def _gate_update(p: np.ndarray, site: int, L: int, p_fill: float) -> np.ndarray:
    """Apply one gate to the distribution over pinned/unpinned strings.

    Configurations are bit strings (bit = 1 marks a pinned site); mixed gate
    inputs resolve to (1,1) with probability p_fill and to (0,0) otherwise.
    """
    r = p.reshape((2,) * L)
    out = r.copy()
    mixed = r[_index(L, {site: 0, site + 1: 1})] + r[_index(L, {site: 1, site + 1: 0})]
    out[_index(L, {site: 0, site + 1: 1})] = 0.0
    out[_index(L, {site: 1, site + 1: 0})] = 0.0
    out[_index(L, {site: 1, site + 1: 1})] += p_fill * mixed
    out[_index(L, {site: 0, site + 1: 0})] += (1 - p_fill) * mixed
    return out.reshape(-1)


def _index(L: int, fixed: dict[int, int]) -> tuple:
    return tuple(fixed.get(i, slice(None)) for i in range(L))


def finite_chain_pinned_fraction(
    q: int,
    L: int,
    t: int,
    initial_bits: np.ndarray,
    picture: str,
) -> np.ndarray:
    """Exact open-chain evolution of the pinned-site configuration chain.

    ``picture='operator'`` grows pinned regions with probability q/(q+1)
    (identity background), ``picture='state'`` with probability 1/(q+1)
    (infinite-temperature background invades).  Returns the distribution
    over the 2^L configurations after t layers.
    """
    if L % 2:
        raise ValueError(f"chain length must be even, got L={L}")
    p_fill = q / (q + 1) if picture == "operator" else 1 / (q + 1)
    if picture not in ("operator", "state"):
        raise ValueError(f"unknown picture {picture!r}")
    p = np.zeros(2**L)
    idx = 0
    for b in initial_bits:
        idx = idx * 2 + int(b)
    p[idx] = 1.0
    for layer in range(t):
        start = layer % 2
        for site in range(start, L - 1, 2):
            p = _gate_update(p, site, L, p_fill)
    return p


def finite_chain_order_parameter(q: int, L: int, site: int, t: int, lam: float) -> float:
    """Exact finite-chain <O(t)> for the tilted product state, O at `site`."""
    bits = np.zeros(L, dtype=int)
    bits[site] = 1
    p = finite_chain_pinned_fraction(q, L, t, bits, picture="operator")
    s = 1.0 - lam * lam
    counts = np.array([bin(c).count("1") for c in range(2**L)])
    return float(np.dot(p, s**counts))


def finite_chain_profile(q: int, L: int, n_inf_sites: int, t: int) -> np.ndarray:
    """Exact finite-chain <O_x(t)> profile for the bipartition protocol.

    The left `n_inf_sites` sites start at infinite temperature, the rest in
    the scar; O_x is the pinned-site projector, giving 1 on scar sites and
    1/q on thermal ones.
    """
    bits = np.zeros(L, dtype=int)
    bits[n_inf_sites:] = 1
    p = finite_chain_pinned_fraction(q, L, t, bits, picture="state")
    r = p.reshape((2,) * L)
    profile = np.empty(L)
    for x in range(L):
        pinned = r[_index(L, {x: 1})].sum()
        profile[x] = pinned + (1.0 - pinned) / q
    return profile
