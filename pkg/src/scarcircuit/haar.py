"""Haar sampling and construction of the scar-preserving two-site gate."""

from __future__ import annotations

import numpy as np

UNITARITY_TOL = 1e-12


def sample_haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Draw a Haar-distributed ``dim x dim`` unitary.

    QR decomposition of a complex Ginibre matrix, with the R diagonal
    rephased to unit modulus so the distribution is exactly Haar.
    """
    if dim < 1:
        raise ValueError(f"dim must be a positive integer, got {dim}")
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z / np.sqrt(2.0))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def build_scar_gate(q: int, rng: np.random.Generator) -> np.ndarray:
    """Two-site gate fixing |00> exactly, Haar on the orthogonal block.

    Row 0 and column 0 are the exact unit vector e0 by construction (no
    floating-point tolerance involved); the remaining (q^2-1)-dimensional
    block is a fresh Haar sample.
    """
    if q < 2:
        raise ValueError(f"local dimension q must be >= 2, got {q}")
    d = q * q
    u = np.zeros((d, d), dtype=complex)
    u[0, 0] = 1.0
    u[1:, 1:] = sample_haar_unitary(d - 1, rng)
    return u


def unitarity_defect(u: np.ndarray) -> float:
    """Max-entry norm of U^dag U - 1."""
    d = u.shape[0]
    return float(np.max(np.abs(u.conj().T @ u - np.eye(d))))
