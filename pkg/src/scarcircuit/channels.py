"""Folded (copy-averaged) two-site channels: analytic projectors and their
Monte Carlo estimates.

A gate u acting on the two-site space induces, on r density-matrix copies,
the folded operator u x u* x ... (r ket/bra pairs).  Averaging over the gate
ensemble gives an orthogonal projector onto the invariant subspace: rank 2
for one copy (scar projector and identity), rank 7 for two copies (products
|j>|j> of the site basis).  Folded matrices are stored with per-site leg
grouping: row index = (site-A folded index, site-B folded index), where the
one-site folded index flattens (k1, b1[, k2, b2]).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import SizeGuardError
from .gram import basis_site_tensors
from .haar import build_scar_gate

# largest number of folded two-site matrix entries held per accumulator;
# admits q<=3 at two copies (6561^2 entries) and rejects anything larger
DEFAULT_ENTRY_GUARD = 50_000_000


def folded_site_dim(q: int, replica_count: int) -> int:
    return q ** (2 * replica_count)


def _fold_gate(u: np.ndarray, q: int, replica_count: int) -> np.ndarray:
    """Rearrange u x u* x ... into a matrix over (site A folded, site B folded).

    The sampled gate carries two-site ket indices; each copy contributes a
    (ket, bra) leg pair per site which must be regrouped site-major.
    """
    m = np.einsum("ab,cd->acbd", u, u.conj())  # legs (k, b; k', b'), two-site each
    if replica_count == 2:
        m1 = m.reshape(q**4, q**4)
        m = np.einsum("ab,cd->acbd", m1, m1)  # legs (k1,b1,k2,b2) x primes
    n_legs = 2 * replica_count
    # split every leg into its site-A and site-B factor: axis 2i = leg i on A,
    # axis 2i+1 = leg i on B, first the row legs then the column legs
    full = np.reshape(m, (q, q) * (2 * n_legs))
    site_a = [2 * i for i in range(2 * n_legs)]
    site_b = [2 * i + 1 for i in range(2 * n_legs)]
    order = site_a[:n_legs] + site_b[:n_legs] + site_a[n_legs:] + site_b[n_legs:]
    d = folded_site_dim(q, replica_count)
    return full.transpose(order).reshape(d * d, d * d)


def _site_invariant_vectors(q: int, replica_count: int) -> np.ndarray:
    """One-site invariant tags as flat vectors, shape (n_tags, d_site)."""
    if replica_count == 1:
        scar = np.zeros((q, q))
        scar[0, 0] = 1.0
        return np.stack([scar.reshape(-1), np.eye(q).reshape(-1)])
    return basis_site_tensors(q).reshape(7, -1)


def analytic_channel(q: int, replica_count: int) -> np.ndarray:
    """Exact averaged two-site channel as an orthogonal projector.

    Columns of V are the products |j>|j> of one-site invariant tags; the
    projector is V (V^T V)^-1 V^T.  For two copies (V^T V) is the
    elementwise-squared Gram matrix.
    """
    if replica_count not in (1, 2):
        raise ValueError(f"replica_count must be 1 or 2, got {replica_count}")
    tags = _site_invariant_vectors(q, replica_count)
    v = np.stack([np.kron(t, t) for t in tags], axis=1)
    overlap = v.T @ v
    return v @ np.linalg.solve(overlap, v.T)


@dataclass
class ChannelTensor:
    """Monte Carlo estimate of a folded two-site channel.

    ``entries`` holds the real part of the sample mean (the exact channel is
    real); ``stderr`` the per-entry standard error of the real part.
    """

    replica_count: int
    q: int
    entries: np.ndarray
    stderr: np.ndarray
    samples: int


def estimate_channel(
    q: int,
    replica_count: int,
    samples: int,
    rng: np.random.Generator,
    entry_guard: int = DEFAULT_ENTRY_GUARD,
) -> ChannelTensor:
    """Entrywise Monte Carlo average of the folded gate over fresh samples."""
    if replica_count not in (1, 2):
        raise ValueError(f"replica_count must be 1 or 2, got {replica_count}")
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    if replica_count == 2 and q > 3:
        raise ValueError(f"two-copy estimation is restricted to q <= 3, got q={q}")
    d = folded_site_dim(q, replica_count)
    n_entries = (d * d) ** 2
    if n_entries > entry_guard:
        raise SizeGuardError(
            f"folded two-site dimension {d * d} needs {n_entries} entries per "
            f"accumulator, above the guard of {entry_guard}"
        )
    acc = np.zeros((d * d, d * d))
    acc_sq = np.zeros((d * d, d * d))
    for _ in range(samples):
        gate = build_scar_gate(q, rng)
        f = _fold_gate(gate, q, replica_count).real
        acc += f
        acc_sq += f * f
    mean = acc / samples
    var = np.maximum(acc_sq / samples - mean * mean, 0.0)
    if samples > 1:
        stderr = np.sqrt(var / (samples - 1))
    else:
        stderr = np.full_like(mean, np.nan)
    return ChannelTensor(
        replica_count=replica_count, q=q, entries=mean, stderr=stderr, samples=samples
    )


def _state_site_vectors(q: int) -> tuple[np.ndarray, np.ndarray]:
    """Folded one-site vectors for the scar projector and for 1/q (state picture)."""
    scar = np.zeros((q, q))
    scar[0, 0] = 1.0
    inf = np.eye(q) / q
    return scar.reshape(-1), inf.reshape(-1)


def scar_pair_weights(channel: ChannelTensor) -> dict[str, float]:
    """Decompose Phi|inf, scar> in the {|scar scar>, |inf inf>} pair basis.

    Returns the two weights and, when the channel is a Monte Carlo estimate,
    standard errors propagated entrywise through the linear extraction.
    """
    if channel.replica_count != 1:
        raise ValueError("pair-weight extraction is defined for the one-copy channel")
    q = channel.q
    scar, inf = _state_site_vectors(q)
    x = np.kron(inf, scar)
    targets = np.stack([np.kron(scar, scar), np.kron(inf, inf)], axis=1)
    dual = np.linalg.solve(targets.T @ targets, targets.T)  # least-squares extractor
    out = channel.entries @ x
    coeffs = dual @ out
    # var(c_k) = sum_ij (dual_ki x_j sigma_ij)^2
    var = (dual**2) @ (channel.stderr**2) @ (x**2)
    se = np.sqrt(var)
    return {
        "weight_scar_pair": float(coeffs[0]),
        "weight_inf_pair": float(coeffs[1]),
        "stderr_scar_pair": float(se[0]),
        "stderr_inf_pair": float(se[1]),
    }
