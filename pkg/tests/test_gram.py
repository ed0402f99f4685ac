import numpy as np
import pytest

from scarcircuit.gram import (
    basis_site_tensors,
    build_gram_data,
    gram_closed_form,
    order_parameter_matrix,
    overlap_vector,
    pairing_tensor,
    site_overlaps,
)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_gram_matches_closed_form_exactly(q):
    tensors = basis_site_tensors(q)
    flat = tensors.reshape(7, -1)
    assert np.array_equal(flat @ flat.T, gram_closed_form(q))


def test_gram_values_q2():
    g = build_gram_data(2).G
    assert g[1, 1] == 4 and g[1, 2] == 2
    assert np.all(g[0] == 1)
    assert list(np.diag(g)) == [1, 4, 2, 2, 4, 2, 2]
    assert np.array_equal(g, g.T)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_gate_matrix_inverts_squared_gram(q):
    data = build_gram_data(q)
    assert np.max(np.abs(data.M @ (data.G * data.G) - np.eye(7))) < 1e-10


@pytest.mark.parametrize("q", [2, 3])
def test_layer_kernel_fixes_equal_pairs(q):
    w = build_gram_data(q).W
    for a in range(7):
        expected = np.zeros(7)
        expected[a] = 1.0
        assert np.allclose(w[:, a, a], expected, atol=1e-12)


@pytest.mark.parametrize("q,lam", [(2, 0.0), (2, 0.5), (2, 1.0), (3, 0.3)])
def test_overlap_vector_against_direct_contraction(q, lam):
    # independent oracle: contract rho x rho explicitly against each tensor
    psi = np.zeros(q)
    psi[0] = np.sqrt(1 - lam * lam)
    psi[1] = lam
    rho = np.outer(psi, psi)
    four_leg = np.einsum("ab,cd->abcd", rho, rho)
    direct = np.einsum("jabcd,abcd->j", basis_site_tensors(q), four_leg)
    assert np.allclose(overlap_vector(q, lam).v, direct, atol=1e-12)


def test_overlap_vector_limits():
    assert np.allclose(overlap_vector(2, 0.0).v, np.ones(7))
    assert np.allclose(overlap_vector(3, 1.0).v, [0, 1, 0, 0, 1, 0, 0])
    with pytest.raises(ValueError):
        overlap_vector(2, 1.5)


def test_pairing_tensors_are_basis_elements():
    q = 3
    t = basis_site_tensors(q)
    assert np.array_equal(pairing_tensor(q, "identity"), t[1])
    assert np.array_equal(pairing_tensor(q, "swap"), t[4])
    o = order_parameter_matrix(q)
    # the projector insertion pins all four legs in either pairing
    assert np.array_equal(pairing_tensor(q, "identity", insert=o), t[0])
    assert np.array_equal(pairing_tensor(q, "swap", insert=o), t[0])


def test_site_overlaps_recover_gram_columns():
    q = 2
    g = build_gram_data(q).G
    assert np.allclose(site_overlaps(q, pairing_tensor(q, "swap")), g[:, 4])
    assert np.allclose(site_overlaps(q, pairing_tensor(q, "identity")), g[:, 1])
