"""Brute-force circuit oracle on small chains.

Every averaged quantity produced by the folded formalisms is re-derivable by
sampling explicit circuits and averaging.  States are evolved as dense
vectors (one fresh circuit per realization); the OTOC evolves the inserted
projector as a dense operator, so its infinite-temperature trace is exact
per realization.  Brickwork layout: layer l applies gates to pairs starting
at site (l mod 2); the end sites idle on odd layers (open boundaries).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import SizeGuardError
from .haar import build_scar_gate
from .rng import stream

STATE_ENTRY_GUARD = 2**14


@dataclass
class OracleResult:
    observable_name: str
    time_series: list[tuple[int, float, float]]  # (layer, mean, stderr)
    samples: int
    seed: int
    values: np.ndarray = field(repr=False, default=None)  # per (sample, layer)

    def mean(self, layer: int) -> float:
        return self.time_series[layer][1]

    def stderr(self, layer: int) -> float:
        return self.time_series[layer][2]


def _layer_pairs(L: int, layer: int) -> list[int]:
    return list(range(layer % 2, L - 1, 2))


def _apply_gate_state(psi: np.ndarray, u: np.ndarray, site: int, L: int, q: int):
    left = q**site
    right = q ** (L - site - 2)
    r = psi.reshape(left, q * q, right)
    return np.einsum("ab,ibj->iaj", u, r).reshape(-1)


def _apply_gate_operator(op: np.ndarray, u: np.ndarray, site: int, L: int, q: int):
    d = q**L
    left = q**site
    right = q ** (L - site - 2)
    r = op.reshape(left, q * q, right * d)
    r = np.einsum("ab,ibj->iaj", u, r)
    r = r.reshape(d, left, q * q, right)
    r = np.einsum("ab,kibj->kiaj", u.conj(), r)
    return r.reshape(d, d)


def _product_state(L: int, q: int, lam: float) -> np.ndarray:
    one_site = np.zeros(q, dtype=complex)
    one_site[0] = np.sqrt(1.0 - lam * lam)
    one_site[1] = lam
    psi = one_site
    for _ in range(L - 1):
        psi = np.kron(psi, one_site)
    return psi


def _basis_state(digits: np.ndarray, q: int) -> np.ndarray:
    idx = 0
    for d in digits:
        idx = idx * q + int(d)
    psi = np.zeros(q ** len(digits), dtype=complex)
    psi[idx] = 1.0
    return psi


def _site_projector_mask(L: int, q: int, site: int) -> np.ndarray:
    return (np.arange(q**L) // q ** (L - 1 - site)) % q == 0


def _order_parameter(psi: np.ndarray, mask: np.ndarray) -> float:
    return float(np.sum(np.abs(psi[mask]) ** 2))


def _half_chain_purity(psi: np.ndarray, d_a: int) -> float:
    m = psi.reshape(d_a, -1)
    g = m @ m.conj().T
    return float(np.vdot(g, g).real)


def evolve_exact_oracle(
    L: int,
    q: int,
    layers: int,
    initial_state_spec,
    observable_spec,
    samples: int,
    seed: int,
) -> OracleResult:
    """Realization-averaged time series of an observable on an open chain.

    ``initial_state_spec``: ``("product", lam)`` for the globally tilted
    product state, ``("bipartition", n_inf)`` for n_inf infinite-temperature
    sites (sampled computational basis states) followed by scar sites, or
    ``("infinite_temperature",)`` for trace-evaluated observables.

    ``observable_spec``: ``("order_parameter", site)``,
    ``("half_chain_purity",)`` or ``("otoc", site_a, site_b)``; the OTOC
    ignores the initial state and is evaluated at infinite temperature.

    Randomness: gate stream (sample, 1 + layer); initial-state stream
    (sample, 0).  The time series covers layers 0 .. `layers` inclusive.
    """
    if L % 2:
        raise ValueError(f"chain length must be even, got L={L}")
    if q**L > STATE_ENTRY_GUARD:
        raise SizeGuardError(
            f"state vector needs q**L = {q**L} entries, above the guard of "
            f"{STATE_ENTRY_GUARD}"
        )
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    kind = observable_spec[0]
    values = np.empty((samples, layers + 1))
    for s in range(samples):
        if kind == "otoc":
            values[s] = _otoc_realization(L, q, layers, observable_spec, seed, s)
        else:
            values[s] = _state_realization(
                L, q, layers, initial_state_spec, observable_spec, seed, s
            )
    mean = values.mean(axis=0)
    if samples > 1:
        se = values.std(axis=0, ddof=1) / np.sqrt(samples)
    else:
        se = np.zeros(layers + 1)
    series = [(t, float(mean[t]), float(se[t])) for t in range(layers + 1)]
    name = kind if kind != "otoc" else f"otoc[{observable_spec[1]},{observable_spec[2]}]"
    return OracleResult(
        observable_name=name, time_series=series, samples=samples, seed=seed,
        values=values,
    )


def _state_realization(L, q, layers, initial_state_spec, observable_spec, seed, s):
    if initial_state_spec[0] == "product":
        psi = _product_state(L, q, initial_state_spec[1])
    elif initial_state_spec[0] == "bipartition":
        n_inf = initial_state_spec[1]
        digits = np.zeros(L, dtype=int)
        init_rng = stream(seed, s, 0)
        digits[:n_inf] = init_rng.integers(0, q, size=n_inf)
        psi = _basis_state(digits, q)
    else:
        raise ValueError(f"unknown initial state spec {initial_state_spec!r}")

    kind = observable_spec[0]
    if kind == "order_parameter":
        mask = _site_projector_mask(L, q, observable_spec[1])
        measure = lambda p: _order_parameter(p, mask)  # noqa: E731
    elif kind == "half_chain_purity":
        d_a = q ** (L // 2)
        measure = lambda p: _half_chain_purity(p, d_a)  # noqa: E731
    else:
        raise ValueError(f"unknown observable spec {observable_spec!r}")

    out = np.empty(layers + 1)
    out[0] = measure(psi)
    for layer in range(layers):
        gate_rng = stream(seed, s, 1 + layer)
        for site in _layer_pairs(L, layer):
            psi = _apply_gate_state(psi, build_scar_gate(q, gate_rng), site, L, q)
        out[layer + 1] = measure(psi)
    return out


def _otoc_realization(L, q, layers, observable_spec, seed, s):
    _, site_a, site_b = observable_spec
    d = q**L
    mask_a = _site_projector_mask(L, q, site_a)
    mask_b = _site_projector_mask(L, q, site_b)
    op = np.zeros((d, d), dtype=complex)
    op[mask_a, mask_a] = 1.0  # projector at site_a, Schroedinger-evolved
    out = np.empty(layers + 1)
    ix = np.ix_(mask_b, mask_b)

    def correlator() -> float:
        m = op[ix]
        return float(np.sum(m * m.T).real / d)

    out[0] = correlator()
    for layer in range(layers):
        gate_rng = stream(seed, s, 1 + layer)
        for site in _layer_pairs(L, layer):
            op = _apply_gate_operator(op, build_scar_gate(q, gate_rng), site, L, q)
        out[layer + 1] = correlator()
    return out
