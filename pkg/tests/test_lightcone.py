import numpy as np
import pytest

from scarcircuit.exceptions import SizeGuardError
from scarcircuit.gram import SYM_ID, SYM_SWAP, build_gram_data
from scarcircuit.lightcone import (
    _measure_against_boundary,
    evolve_lightcone,
    lightcone_insert,
    lightcone_step,
    lightcone_trace,
    otoc,
    otoc_series,
)
from scarcircuit.pairstate import finite_otoc_series


@pytest.fixture(scope="module")
def gram2():
    return build_gram_data(2)


def test_vacuum_is_stationary(gram2):
    for kind in ("swap", "identity"):
        st = evolve_lightcone(2, {"vacuum": kind, "insert": None}, 5, gram2)
        vac = SYM_SWAP if kind == "swap" else SYM_ID
        idx = (vac,) * 5
        assert st.amplitudes[idx] == pytest.approx(1.0, abs=1e-12)
        off = np.abs(st.amplitudes).sum() - abs(st.amplitudes[idx])
        assert off < 1e-12


def test_trace_contract(gram2):
    # the inserted-projector state measures to exactly 1/q at every time
    for t in range(0, 5):
        st = evolve_lightcone(2, {"vacuum": "swap"}, t, gram2)
        assert lightcone_trace(st, gram2) == pytest.approx(0.5, abs=1e-10)
    # pure vacuum measures to exactly 1
    vac = evolve_lightcone(2, {"vacuum": "swap", "insert": None}, 3, gram2)
    assert lightcone_trace(vac, gram2) == pytest.approx(1.0, abs=1e-12)
    vac0 = evolve_lightcone(2, {"vacuum": "swap", "insert": None}, 0, gram2)
    assert lightcone_trace(vac0, gram2) == pytest.approx(1.0, abs=1e-12)


def test_otoc_t0_values():
    assert otoc(2, 0, 0) == pytest.approx(0.5, abs=1e-15)
    assert otoc(2, 3, 0) == pytest.approx(0.25, abs=1e-15)
    assert otoc(3, 0, 0) == pytest.approx(1 / 3, abs=1e-15)


@pytest.mark.parametrize("sep,t_top", [(0, 6), (1, 5), (3, 4)])
def test_matches_finite_chain_inside_the_cone(gram2, sep, t_top):
    # open chain large enough that no boundary enters either causal cone;
    # the insertion sits on an even site, matching the infinite-chain grid
    for t in range(0, t_top + 1):
        a = t + (t % 2)
        L = a + sep + t + 2
        L += L % 2
        L = max(L, 8)
        fin = finite_otoc_series(2, L, a, a + sep, t, gram2)[t]
        assert otoc(2, sep, t, gram2) == pytest.approx(fin, abs=1e-10)


def test_split_agrees_with_unsplit(gram2):
    # evolve the insertion all the way and contract against the raw
    # boundary; must equal the split-evolution value
    for t in (3, 4, 5, 6, 7):
        bot = evolve_lightcone(2, {"vacuum": "swap", "site": 0}, t, gram2)
        direct = _measure_against_boundary(bot, gram2, 0)
        assert otoc(2, 0, t, gram2) == pytest.approx(direct, abs=1e-12)


def test_series_matches_pointwise(gram2):
    series = otoc_series(2, 1, 6, gram2)
    for t in range(7):
        assert series[t] == pytest.approx(otoc(2, 1, t, gram2), abs=1e-12)


def test_size_guard_mentions_split(gram2):
    with pytest.raises(SizeGuardError) as err:
        evolve_lightcone(2, {"vacuum": "swap"}, 6, gram2, guard=7**4)
    assert "split" in str(err.value)


def test_step_parity_mismatch_rejected(gram2):
    st = lightcone_insert(2, 0, SYM_SWAP, gram2, 0)
    with pytest.raises(ValueError):
        lightcone_step(st, gram2, 0)  # next layer must have odd parity
