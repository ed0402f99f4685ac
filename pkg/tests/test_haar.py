import numpy as np
import pytest

from scarcircuit.haar import build_scar_gate, sample_haar_unitary, unitarity_defect
from scarcircuit.rng import stream


def test_dim_one_is_a_phase():
    u = sample_haar_unitary(1, stream(0))
    assert u.shape == (1, 1)
    assert abs(abs(u[0, 0]) - 1.0) < 1e-14


def test_invalid_dimension_rejected():
    with pytest.raises(ValueError):
        sample_haar_unitary(0, stream(0))
    with pytest.raises(ValueError):
        build_scar_gate(1, stream(0))


@pytest.mark.parametrize("dim", [2, 3, 7, 16])
def test_unitarity(dim):
    u = sample_haar_unitary(dim, stream(1, dim))
    assert unitarity_defect(u) < 1e-12


def test_first_moment_of_haar_column():
    # E|U_00|^2 = 1/dim for the Haar measure (first moment); 1e5 samples at
    # dim 3 pins the sampler against a biased QR phase convention.
    rng = stream(2)
    n = 100_000
    vals = np.empty(n)
    for i in range(n):
        vals[i] = abs(sample_haar_unitary(3, rng)[0, 0]) ** 2
    se = vals.std(ddof=1) / np.sqrt(n)
    assert abs(vals.mean() - 1.0 / 3.0) < 5 * se


def test_scar_gate_fixes_00_exactly():
    for q in (2, 3):
        u = build_scar_gate(q, stream(3, q))
        e0 = np.zeros(q * q)
        e0[0] = 1.0
        # bit-for-bit: row and column 0 are exactly e0
        assert np.array_equal(u[:, 0], e0.astype(complex))
        assert np.array_equal(u[0, :], e0.astype(complex))
        assert unitarity_defect(u) < 1e-12


def test_distinct_streams_give_distinct_blocks():
    u1 = build_scar_gate(2, stream(4, 0))
    u2 = build_scar_gate(2, stream(4, 1))
    assert not np.allclose(u1[1:, 1:], u2[1:, 1:])
    assert unitarity_defect(u1) < 1e-12 and unitarity_defect(u2) < 1e-12
