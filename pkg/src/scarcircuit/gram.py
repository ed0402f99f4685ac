"""Seven-element site basis of the two-copy averaged circuit.

Each site of the doubled (two density-matrix copies) picture carries four
legs, ordered ``(k1, b1, k2, b2)``: ket and bra of copy 1, ket and bra of
copy 2.  The averaged gate is a projector whose image is spanned, on a gated
pair of sites, by products ``|j>|j>`` of seven one-site tensors:

====  =========================================================
 j    tensor on legs (k1, b1, k2, b2)
====  =========================================================
 0    all four legs pinned to |0>  (scar projector in both copies)
 1    d(k1,b1) d(k2,b2)            (identity pairing, both copies)
 2    d(k1,b1) * pins on (k2,b2)
 3    pins on (k1,b1) * d(k2,b2)
 4    d(k1,b2) d(k2,b1)            (swap pairing)
 5    d(k1,b2) * pins on (k2,b1)
 6    d(k2,b1) * pins on (k1,b2)
====  =========================================================

The assignment of 2/3 and 5/6 is fixed (up to copy relabelling) by requiring
the overlap matrix to equal the closed form `gram_closed_form`; this is
checked at construction time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateBasisError

BASIS_SIZE = 7

# symbol indices used throughout
SYM_SCAR = 0
SYM_ID = 1
SYM_SWAP = 4


def basis_site_tensors(q: int) -> np.ndarray:
    """The seven one-site tensors, shape ``(7, q, q, q, q)``."""
    if q < 2:
        raise ValueError(f"local dimension q must be >= 2, got {q}")
    e = np.eye(q)
    p = np.zeros(q)
    p[0] = 1.0
    t = np.empty((BASIS_SIZE, q, q, q, q))
    t[0] = np.einsum("a,b,c,d->abcd", p, p, p, p)
    t[1] = np.einsum("ab,cd->abcd", e, e)
    t[2] = np.einsum("ab,c,d->abcd", e, p, p)
    t[3] = np.einsum("a,b,cd->abcd", p, p, e)
    t[4] = np.einsum("ad,cb->abcd", e, e)
    t[5] = np.einsum("ad,c,b->abcd", e, p, p)
    t[6] = np.einsum("cb,a,d->abcd", e, p, p)
    return t


# entrywise exponents of q in the Gram matrix: G = q**GRAM_EXPONENTS
GRAM_EXPONENTS = np.array(
    [
        [0, 0, 0, 0, 0, 0, 0],
        [0, 2, 1, 1, 1, 0, 0],
        [0, 1, 1, 0, 0, 0, 0],
        [0, 1, 0, 1, 0, 0, 0],
        [0, 1, 0, 0, 2, 1, 1],
        [0, 0, 0, 0, 1, 1, 0],
        [0, 0, 0, 0, 1, 0, 1],
    ],
    dtype=int,
)


def gram_closed_form(q: int | float) -> np.ndarray:
    """Closed-form overlap matrix G(q) of the seven basis tensors."""
    return np.asarray(float(q) ** GRAM_EXPONENTS)


@dataclass(frozen=True)
class GramData:
    """Gram matrix G, gate matrix M = (G*G)^-1 and layer kernel W.

    ``W[k, a, b]`` is the weight with which a gate maps incoming site
    symbols (a, b) to the outgoing pair symbol k; ``W[k, a, a] = d(k, a)``,
    so uniform-symbol states are gate fixed points.
    """

    q: int
    G: np.ndarray
    M: np.ndarray
    W: np.ndarray


def build_gram_data(q: int) -> GramData:
    tensors = basis_site_tensors(q)
    flat = tensors.reshape(BASIS_SIZE, -1)
    G = flat @ flat.T
    if not np.array_equal(G, gram_closed_form(q)):
        raise DegenerateBasisError(
            f"site-basis overlaps disagree with the closed form at q={q}"
        )
    squared = G * G
    try:
        M = np.linalg.inv(squared)
    except np.linalg.LinAlgError as exc:
        raise DegenerateBasisError(
            f"elementwise-squared Gram matrix is singular at q={q}"
        ) from exc
    W = np.einsum("kl,la,lb->kab", M, G, G)
    return GramData(q=q, G=G, M=M, W=W)


@dataclass(frozen=True)
class SiteOverlapVector:
    """Per-site overlaps of the perturbed-scar state rho x rho with the basis."""

    q: int
    lam: float
    v: np.ndarray


def overlap_vector(q: int, lam: float) -> SiteOverlapVector:
    """Overlaps <j| rho x rho> for rho = |psi><psi| of the tilted product state.

    With ``s = 1 - lam**2`` the vector is ``(s^2, 1, s, s, 1, s, s)``: the
    trace and purity entries are 1, every scar-pinned pairing carries one
    factor of s per pinned copy.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    s = 1.0 - lam * lam
    v = np.array([s * s, 1.0, s, s, 1.0, s, s])
    return SiteOverlapVector(q=q, lam=lam, v=v)


def pairing_tensor(q: int, kind: str, insert: np.ndarray | None = None) -> np.ndarray:
    """One-site boundary tensor: identity/swap pairing, optionally with an
    operator inserted into each copy.

    ``kind='identity'`` gives ``X[b1,k1] X[b2,k2]`` and ``kind='swap'`` gives
    ``X[k2,b1] X[k1,b2]``, with ``X`` the inserted operator (default: the
    identity matrix, recovering the plain pairings).
    """
    x = np.eye(q) if insert is None else np.asarray(insert)
    if x.shape != (q, q):
        raise ValueError(f"insert must be a {q}x{q} matrix")
    if kind == "identity":
        return np.einsum("ba,dc->abcd", x, x)
    if kind == "swap":
        return np.einsum("cb,ad->abcd", x, x)
    raise ValueError(f"unknown pairing kind {kind!r}")


def order_parameter_matrix(q: int) -> np.ndarray:
    """The local observable |0><0| used for order parameter and OTOC."""
    o = np.zeros((q, q))
    o[0, 0] = 1.0
    return o


def site_overlaps(q: int, tensor: np.ndarray) -> np.ndarray:
    """Overlaps of a one-site four-leg tensor with all seven basis tensors."""
    return np.einsum("jabcd,abcd->j", basis_site_tensors(q), tensor)
