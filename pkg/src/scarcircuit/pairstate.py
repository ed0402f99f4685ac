"""Finite-chain evolution in the seven-symbol pair basis.

After any layer the averaged two-copy state is a combination of products of
``|j>|j>`` blocks over that layer's gate pairs.  Two parities alternate on an
open chain of even length L:

* parity A (after an even layer): L/2 block symbols, gates at (0,1), (2,3), ...
* parity B (after an odd layer): the two end sites idle and keep explicit
  one-site symbols, plus L/2 - 1 interior blocks; the amplitude table has
  L/2 + 1 axes ordered (left site, blocks..., right site).

Amplitude tables are dense ndarrays of shape (7,)*n; states become dense
after a few layers, so no sparse map is kept.  A layer application is a
zipper of einsum steps whose intermediates never exceed the output size.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import log

import numpy as np

from .exceptions import NumericalFailureError, SizeGuardError
from .gram import (
    BASIS_SIZE,
    GramData,
    SYM_ID,
    SYM_SWAP,
    build_gram_data,
    order_parameter_matrix,
    overlap_vector,
    pairing_tensor,
    site_overlaps,
)

DEFAULT_AMPLITUDE_GUARD = 7**9  # admits L <= 16


@dataclass
class PairConfigState:
    """Amplitude table over symbol strings between brickwork layers."""

    L: int
    q: int
    parity: str  # 'A' or 'B'
    amplitudes: np.ndarray

    def n_axes(self) -> int:
        return self.amplitudes.ndim


def _check_guard(n_axes: int, guard: int):
    if BASIS_SIZE**n_axes > guard:
        raise SizeGuardError(
            f"amplitude table with {BASIS_SIZE}**{n_axes} entries exceeds the "
            f"guard of {guard}"
        )


def state_from_site_overlaps(
    L: int,
    q: int,
    overlaps: np.ndarray,
    gram: GramData | None = None,
    guard: int = DEFAULT_AMPLITUDE_GUARD,
) -> PairConfigState:
    """Parity-A state produced by the first layer from per-site boundary
    vectors ``overlaps[x, j] = <j | site tensor x>``."""
    if L % 2 or L < 4:
        raise ValueError(f"chain length must be even and >= 4, got L={L}")
    gram = gram or build_gram_data(q)
    _check_guard(L // 2, guard)
    blocks = [
        gram.M @ (overlaps[2 * i] * overlaps[2 * i + 1]) for i in range(L // 2)
    ]
    amps = reduce(np.multiply.outer, blocks)
    return PairConfigState(L=L, q=q, parity="A", amplitudes=amps)


def initial_state(
    L: int,
    q: int,
    lam: float,
    gram: GramData | None = None,
    guard: int = DEFAULT_AMPLITUDE_GUARD,
) -> PairConfigState:
    """State of the tilted product state after the first layer (t = 1)."""
    v = overlap_vector(q, lam).v
    overlaps = np.tile(v, (L, 1))
    return state_from_site_overlaps(L, q, overlaps, gram, guard)


def _zip_consume(amps: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Gates between all consecutive axes; every input symbol is consumed.

    result[k_1..k_{m-1}] = sum_s amps[s_0..s_{m-1}] prod_g W[k_g, s_{g-1}, s_g].
    Intermediates stay at the output size.
    """
    m = amps.ndim
    if m < 2:
        raise ValueError("need at least two symbols to place a gate")
    n = BASIS_SIZE
    cur = amps.reshape(1, n, n, -1)  # (prefix, s_{g-1}, s_g, rest)
    for _ in range(1, m - 1):  # all gates but the last consume left, keep right
        cur = np.einsum("pabr,kab->pkbr", cur, W)
        p, k, b, r = cur.shape
        cur = cur.reshape(p * k, b, n, r // n)
    cur = cur.reshape(-1, n, n)
    out = np.einsum("pab,kab->pk", cur, W)  # final gate consumes both symbols
    return out.reshape((n,) * (m - 1))


def _zip_keep_ends(amps: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Gates between consecutive axes, first and last symbols kept.

    result[s_0, k_1..k_{m-1}, s_{m-1}]; the end symbols also feed their
    adjacent gates (they sit on idle sites of the next layer).
    """
    m = amps.ndim
    if m < 2:
        raise ValueError("need at least two symbols to place a gate")
    n = BASIS_SIZE
    cur = amps.reshape(1, n, n, -1)
    cur = np.einsum("pabr,kab->pakbr", cur, W)  # gate 1, keep s_0 and s_1
    p, a, k, b, r = cur.shape
    cur = cur.reshape(p * a * k, b, r)  # (prefix, s_1, rest)
    for _ in range(2, m - 1):  # middle gates consume their left symbol
        p, b, r = cur.shape
        cur = cur.reshape(p, b, n, r // n)
        cur = np.einsum("pabr,kab->pkbr", cur, W)
        p, k, b, r = cur.shape
        cur = cur.reshape(p * k, b, r)
    if m > 2:
        # final gate: consume s_{m-2}, keep s_{m-1} as the right end symbol
        cur = np.einsum("pab,kab->pkb", cur.reshape(-1, n, n), W)
    return cur.reshape((n,) * (m + 1))


def apply_layer(
    state: PairConfigState,
    gram: GramData,
    guard: int = DEFAULT_AMPLITUDE_GUARD,
) -> PairConfigState:
    """Advance the state by one brickwork layer (parity alternates A/B)."""
    if gram.q != state.q:
        raise ValueError(
            f"gram data is for q={gram.q} but the state has q={state.q}"
        )
    if state.parity == "A":
        _check_guard(state.n_axes() + 1, guard)
        amps = _zip_keep_ends(state.amplitudes, gram.W)
        return PairConfigState(L=state.L, q=state.q, parity="B", amplitudes=amps)
    _check_guard(state.n_axes() - 1, guard)
    amps = _zip_consume(state.amplitudes, gram.W)
    return PairConfigState(L=state.L, q=state.q, parity="A", amplitudes=amps)


def evolve(
    state: PairConfigState,
    gram: GramData,
    layers: int,
    guard: int = DEFAULT_AMPLITUDE_GUARD,
) -> PairConfigState:
    for _ in range(layers):
        state = apply_layer(state, gram, guard)
    return state


def _site_factor_axes(state: PairConfigState, site_factors: np.ndarray) -> list:
    """Per-axis measurement vectors: block axes take the product of their two
    site factors, end-site axes (parity B) a single factor."""
    L = state.L
    if site_factors.shape != (L, BASIS_SIZE):
        raise ValueError(f"site_factors must have shape ({L}, {BASIS_SIZE})")
    if state.parity == "A":
        return [
            site_factors[2 * i] * site_factors[2 * i + 1] for i in range(L // 2)
        ]
    interior = [
        site_factors[2 * i + 1] * site_factors[2 * i + 2]
        for i in range(L // 2 - 1)
    ]
    return [site_factors[0]] + interior + [site_factors[L - 1]]


def measure_sites(state: PairConfigState, site_factors: np.ndarray) -> float:
    """Contract the state against per-site measurement vectors
    ``site_factors[x, j] = <measurement at x | j>``."""
    vectors = _site_factor_axes(state, site_factors)
    val = state.amplitudes
    for vec in vectors:
        val = np.tensordot(val, vec, axes=([0], [0]))
    return float(val)


def trace_measurement(state: PairConfigState, gram: GramData) -> float:
    """Contraction against the all-identity measurement; must equal 1."""
    factors = np.tile(gram.G[SYM_ID], (state.L, 1))
    return measure_sites(state, factors)


def renyi2_site_factors(L: int, region, gram: GramData) -> np.ndarray:
    """Swap measurement on the region, identity elsewhere."""
    sites = sorted(region)
    if sites and sites != list(range(sites[0], sites[-1] + 1)):
        raise ValueError("region must be a contiguous set of sites")
    if sites and (sites[0] < 0 or sites[-1] >= L):
        raise ValueError(f"region must lie within 0..{L - 1}")
    factors = np.tile(gram.G[SYM_ID], (L, 1))
    for x in sites:
        factors[x] = gram.G[SYM_SWAP]
    return factors


def measure_purity(state: PairConfigState, gram: GramData, region) -> float:
    """Averaged purity of the reduced state on a contiguous region."""
    return measure_sites(state, renyi2_site_factors(state.L, region, gram))


def measure_renyi2(state: PairConfigState, gram: GramData, region) -> float:
    """Annealed second Renyi entropy -log(averaged purity) of the region.

    Entropies in [-1e-9, 0) from roundoff are clamped to 0; anything worse,
    or a non-positive purity, raises.
    """
    purity = measure_purity(state, gram, region)
    if purity <= 0.0:
        raise NumericalFailureError(
            f"averaged purity {purity} is not positive; contraction failed"
        )
    s2 = -log(purity)
    if s2 < 0.0:
        if s2 < -1e-9:
            raise NumericalFailureError(
                f"negative entropy {s2} beyond the 1e-9 roundoff tolerance"
            )
        return 0.0
    return s2


def half_chain_region(L: int) -> range:
    return range(L // 2)


# ---------------------------------------------------------------------------
# OTOC on the finite chain


def otoc_boundary_overlaps(q: int, L: int, site_a: int) -> np.ndarray:
    """Bottom-boundary per-site overlap vectors for the OTOC.

    Swap pairing everywhere; at the insertion site the pairing carries the
    local projector in both copies, which contracts to the all-ones vector.
    """
    swap = site_overlaps(q, pairing_tensor(q, "swap"))
    o = order_parameter_matrix(q)
    inserted = site_overlaps(q, pairing_tensor(q, "swap", insert=o))
    overlaps = np.tile(swap, (L, 1))
    overlaps[site_a] = inserted
    return overlaps


def otoc_measure_factors(q: int, L: int, site_b: int, gram: GramData) -> np.ndarray:
    """Top-boundary per-site factors: identity pairing with the projector
    inserted at the measurement site."""
    o = order_parameter_matrix(q)
    inserted = site_overlaps(q, pairing_tensor(q, "identity", insert=o))
    factors = np.tile(gram.G[SYM_ID].astype(float), (L, 1))
    factors[site_b] = inserted
    return factors


def finite_otoc_series(
    q: int,
    L: int,
    site_a: int,
    site_b: int,
    t_max: int,
    gram: GramData | None = None,
    guard: int = DEFAULT_AMPLITUDE_GUARD,
) -> np.ndarray:
    """Infinite-temperature OTOC of the two local projectors, t = 0..t_max."""
    gram = gram or build_gram_data(q)
    out = np.empty(t_max + 1)
    ta = pairing_tensor(q, "swap")
    tb = pairing_tensor(q, "identity")
    o = order_parameter_matrix(q)
    ins_a = pairing_tensor(q, "swap", insert=o)
    ins_b = pairing_tensor(q, "identity", insert=o)
    # t = 0: plain product of per-site boundary overlaps
    val = 1.0
    for x in range(L):
        bot = ins_a if x == site_a else ta
        top = ins_b if x == site_b else tb
        val *= float(np.einsum("abcd,abcd->", top, bot)) / q
    out[0] = val
    if t_max == 0:
        return out
    factors = otoc_measure_factors(q, L, site_b, gram) / q
    state = state_from_site_overlaps(
        L, q, otoc_boundary_overlaps(q, L, site_a), gram, guard
    )
    out[1] = measure_sites(state, factors)
    for t in range(2, t_max + 1):
        state = apply_layer(state, gram, guard)
        out[t] = measure_sites(state, factors)
    return out
