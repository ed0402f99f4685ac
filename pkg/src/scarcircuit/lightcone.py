"""Thermodynamic-limit evolution inside a causal cone.

A single-site insertion into a translation-invariant vacuum only disturbs
sites inside its light cone: outside, gates map the vacuum pairing to itself
with amplitude exactly 1, so an evolved state is a semi-infinite vacuum
string flanking an interior of one block symbol per applied layer.  The
interior amplitudes (7**t of them after t layers) are evolved exactly; no
truncation is involved.

Normalization contract: contracting the state against its dual vacuum
measurement (identity pairing against a swap vacuum and vice versa) carries
a factor 1/q per site, so every site outside the interior contributes
exactly 1 and the infinite product is finite.

The OTOC uses two such states: the inserted projector against a swap vacuum
evolved upward, and the measurement insertion against an identity vacuum
evolved downward; `otoc` glues them with a brickwork-offset Gram kernel in
the middle, which doubles the reachable time for a given interior size.
Brickwork convention matches the finite chain: layer l has gates starting at
sites congruent to l mod 2, and the bottom insertion sits at site 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import SizeGuardError
from .gram import (
    BASIS_SIZE,
    GramData,
    SYM_ID,
    SYM_SCAR,
    SYM_SWAP,
    build_gram_data,
    order_parameter_matrix,
    pairing_tensor,
    site_overlaps,
)

DEFAULT_AMPLITUDE_GUARD = 7**9


@dataclass
class LightconeState:
    """Interior amplitudes of a light-cone state.

    ``lo`` is the leftmost interior site; block j covers sites
    (lo + 2j, lo + 2j + 1).  ``amplitudes`` has one axis per block.
    ``t`` counts applied layers (equal to the number of blocks).
    """

    q: int
    vacuum: int
    lo: int
    t: int
    amplitudes: np.ndarray | None  # None until the first layer is applied
    site: int  # insertion site
    insert_symbol: int | None = None  # boundary symbol at `site` while t == 0

    def n_blocks(self) -> int:
        return 0 if self.amplitudes is None else self.amplitudes.ndim

    def hi(self) -> int:
        return self.lo + 2 * self.n_blocks() - 1


def _dual_vacuum(vacuum: int) -> int:
    if vacuum == SYM_SWAP:
        return SYM_ID
    if vacuum == SYM_ID:
        return SYM_SWAP
    raise ValueError(f"no dual measurement defined for vacuum symbol {vacuum}")


def insertion_overlaps(q: int, insert: str | None) -> np.ndarray:
    """Per-site overlap vector of the inserted boundary tensor.

    The local projector inserted into either pairing contracts every basis
    tensor to 1 (it pins all four legs), independent of the pairing kind.
    """
    if insert is None:
        return None
    if insert != "projector":
        raise ValueError(f"unknown insertion {insert!r}")
    o = order_parameter_matrix(q)
    vec = site_overlaps(q, pairing_tensor(q, "identity", insert=o))
    return vec


def _check_guard(n_blocks: int, guard: int):
    if BASIS_SIZE**n_blocks > guard:
        raise SizeGuardError(
            f"light-cone interior with {BASIS_SIZE}**{n_blocks} amplitudes "
            f"exceeds the guard of {guard}; use the split evolution in `otoc`"
        )


def lightcone_insert(
    q: int,
    site: int,
    vacuum: int,
    gram: GramData,
    layer_parity: int,
    insert: str | None = "projector",
) -> LightconeState:
    """Apply the first layer: the gate covering the insertion site produces a
    one-block interior, every other gate maps vacuum to vacuum exactly."""
    start = site - ((site - layer_parity) % 2)
    o_vac = gram.G[:, vacuum]
    o_site = insertion_overlaps(q, insert)
    if o_site is None:
        o_site = o_vac
    amps = gram.M @ (o_vac * o_site)
    return LightconeState(q=q, vacuum=vacuum, lo=start, t=1, amplitudes=amps, site=site)


def lightcone_step(
    state: LightconeState,
    gram: GramData,
    layer_parity: int,
    guard: int = DEFAULT_AMPLITUDE_GUARD,
) -> LightconeState:
    """One layer: interior grows by one block, vacuum caps on both ends."""
    n = state.n_blocks()
    if n == 0:
        raise ValueError("apply lightcone_insert before stepping")
    if (state.lo - 1) % 2 != layer_parity % 2:
        raise ValueError(
            f"layer parity {layer_parity} does not match the interior grid "
            f"(lo={state.lo})"
        )
    _check_guard(n + 1, guard)
    d = BASIS_SIZE
    W = gram.W
    w_left = W[:, state.vacuum, :]
    w_right = W[:, :, state.vacuum]
    cur = np.einsum("ar,ka->kar", state.amplitudes.reshape(d, -1), w_left)
    for _ in range(1, n):
        p, a, r = cur.shape
        cur = cur.reshape(p, a, d, r // d)
        cur = np.einsum("pabr,kab->pkbr", cur, W)
        p, k, b, r = cur.shape
        cur = cur.reshape(p * k, b, r)
    cur = np.einsum("pa,ka->pk", cur.reshape(-1, d), w_right)
    amps = cur.reshape((d,) * (n + 1))
    return LightconeState(
        q=state.q,
        vacuum=state.vacuum,
        lo=state.lo - 1,
        t=state.t + 1,
        amplitudes=amps,
        site=state.site,
    )


def evolve_lightcone(
    q: int,
    spec: dict,
    t: int,
    gram: GramData | None = None,
    guard: int = DEFAULT_AMPLITUDE_GUARD,
) -> LightconeState:
    """Evolve a single-site insertion for t layers in the infinite chain.

    ``spec`` keys: ``vacuum`` ('swap' or 'identity'), ``site`` (int, default
    0), ``insert`` ('projector' or None), ``first_layer_parity`` (default 0,
    the bottom convention; the downward-evolved measurement side uses the
    parity of its first absorbed layer).
    """
    gram = gram or build_gram_data(q)
    vacuum = {"swap": SYM_SWAP, "identity": SYM_ID}[spec.get("vacuum", "swap")]
    site = spec.get("site", 0)
    parity = spec.get("first_layer_parity", 0)
    insert = spec.get("insert", "projector")
    if t == 0:
        symbol = SYM_SCAR if insert == "projector" else vacuum
        return LightconeState(
            q=q, vacuum=vacuum, lo=site, t=0, amplitudes=None, site=site,
            insert_symbol=symbol,
        )
    _check_guard(t, guard)
    state = lightcone_insert(q, site, vacuum, gram, parity, insert)
    for step in range(1, t):
        state = lightcone_step(state, gram, (parity + step) % 2, guard)
    return state


def lightcone_trace(state: LightconeState, gram: GramData) -> float:
    """Contract against the dual vacuum measurement everywhere (1/q per
    site); the pure-vacuum exterior contributes exactly 1."""
    dual = _dual_vacuum(state.vacuum)
    q = state.q
    if state.amplitudes is None:
        # unevolved: single-site overlap of the insertion boundary symbol
        symbol = state.vacuum if state.insert_symbol is None else state.insert_symbol
        return float(gram.G[dual, symbol]) / q
    row = gram.G[dual] / q
    block = row * row
    val = state.amplitudes
    for _ in range(state.n_blocks()):
        val = np.tensordot(val, block, axes=([0], [0]))
    return float(val)


# ---------------------------------------------------------------------------
# OTOC: swap-vacuum state evolved up, identity-vacuum state evolved down,
# glued by a one-site-offset Gram kernel.


def _measure_against_boundary(
    state: LightconeState, gram: GramData, site_b: int
) -> float:
    """Contract an evolved bottom state against the unevolved top boundary
    (identity pairing everywhere, projector inserted at site_b)."""
    q = state.q
    row_id = gram.G[SYM_ID] / q
    row_ins = np.ones(BASIS_SIZE) / q  # projector insertion overlaps are all 1
    lo, hi = state.lo, state.hi()
    val = state.amplitudes
    for j in range(state.n_blocks()):
        left_site = lo + 2 * j
        f = (row_ins if left_site == site_b else row_id) * (
            row_ins if left_site + 1 == site_b else row_id
        )
        val = np.tensordot(val, f, axes=([0], [0]))
    out = float(val)
    if site_b < lo or site_b > hi:
        out /= q  # disconnected insertion: <T0 | vacuum> / q
    return out


def _middle_contract(
    bot: LightconeState, top: LightconeState, gram: GramData
) -> float:
    """Glue the upward- and downward-evolved interiors.

    Sites carry one bottom and one top symbol; the per-site factor is
    G[top, bottom]/q.  Factors are grouped into slots aligned with the top
    block grid (offset one site from the bottom grid), giving the kernel
    K[T, a, b] = G[T, a] G[T, b] / q^2 over consecutive bottom symbols.
    Slots outside the other interior see that side's vacuum symbol.
    """
    q = bot.q
    d = BASIS_SIZE
    K = np.einsum("ta,tb->tab", gram.G, gram.G) / (q * q)
    k_fixed = K[top.vacuum]  # slot with top outside its interior
    w_outside = K[:, bot.vacuum, bot.vacuum]  # top axis over pure bottom vacuum

    nb, nt = bot.n_blocks(), top.n_blocks()
    slot_lo, slot_hi = bot.lo - 1, bot.hi() + 1  # zipper slot start range
    if (top.lo - slot_lo) % 2:
        raise ValueError("top and bottom interiors are not brickwork-aligned")

    # fold top axes whose slots lie outside the zipper range
    psi_top = top.amplitudes
    keep: list[int] = []
    offset = 0
    for j in range(nt):
        y = top.lo + 2 * j
        if y < slot_lo or y > slot_hi - 1:
            psi_top = np.tensordot(psi_top, w_outside, axes=([j - offset], [0]))
            offset += 1
        else:
            keep.append(j)

    # zipper over bottom axes; slots y = slot_lo, slot_lo+2, ..., slot_hi-1
    slot_starts = list(range(slot_lo, slot_hi, 2))
    top_slots = {top.lo + 2 * j: j for j in keep}
    created = 0
    cur = bot.amplitudes.reshape(1, d, -1)  # (prefix, B0, rest)
    for idx, y in enumerate(slot_starts):
        has_axis = y in top_slots
        first, last = idx == 0, idx == len(slot_starts) - 1
        if first:
            ker = K[:, bot.vacuum, :] if has_axis else k_fixed[bot.vacuum, :]
            if has_axis:
                cur = np.einsum("pbr,kb->pkbr", cur, ker)
                p, k, b, r = cur.shape
                cur = cur.reshape(p * k, b, r)
                created += 1
            else:
                cur = cur * ker[None, :, None]
        elif last:
            ker = K[:, :, bot.vacuum] if has_axis else k_fixed[:, bot.vacuum]
            flat = cur.reshape(-1, d)
            if has_axis:
                cur = np.einsum("pa,ka->pk", flat, ker)
                created += 1
            else:
                cur = np.einsum("pa,a->p", flat, ker)
        else:
            p, a, r = cur.shape
            cur = cur.reshape(p, a, d, r // d)
            if has_axis:
                cur = np.einsum("pabr,kab->pkbr", cur, K)
                p, k, b, r = cur.shape
                cur = cur.reshape(p * k, b, r)
                created += 1
            else:
                cur = np.einsum("pabr,ab->pbr", cur, k_fixed)
    if created != len(keep):
        raise AssertionError("middle zipper created an unexpected axis count")
    out = cur.reshape((d,) * created)
    return float(np.tensordot(out, psi_top, axes=created))


def otoc(
    q: int,
    x_separation: int,
    t: int,
    gram: GramData | None = None,
    guard: int = DEFAULT_AMPLITUDE_GUARD,
) -> float:
    """Infinite-temperature OTOC of two local projectors at separation
    ``x_separation`` after t layers, in the thermodynamic limit.

    Uses split evolution: the insertion pattern moves forward ceil(t/2)
    layers, the measurement pattern backward floor(t/2), then the two are
    contracted, doubling the reachable time for a given interior guard.
    """
    if x_separation < 0:
        raise ValueError("separation must be nonnegative")
    gram = gram or build_gram_data(q)
    if t == 0:
        return 1.0 / q if x_separation == 0 else 1.0 / (q * q)
    k_bot = (t + 1) // 2
    m_top = t - k_bot
    _check_guard(k_bot, guard)
    bot = lightcone_insert(q, 0, SYM_SWAP, gram, 0)
    for step in range(1, k_bot):
        bot = lightcone_step(bot, gram, step % 2, guard)
    if m_top == 0:
        return _measure_against_boundary(bot, gram, x_separation)
    top = lightcone_insert(q, x_separation, SYM_ID, gram, (t - 1) % 2)
    for j in range(1, m_top):
        top = lightcone_step(top, gram, (t - 1 - j) % 2, guard)
    return _middle_contract(bot, top, gram)


def otoc_series(
    q: int,
    x_separation: int,
    t_max: int,
    gram: GramData | None = None,
    guard: int = DEFAULT_AMPLITUDE_GUARD,
) -> np.ndarray:
    """OTOC values for t = 0..t_max (split evolution per time, states cached)."""
    gram = gram or build_gram_data(q)
    out = np.empty(t_max + 1)
    out[0] = 1.0 / q if x_separation == 0 else 1.0 / (q * q)
    bots: dict[int, LightconeState] = {}
    tops: dict[tuple[int, int], LightconeState] = {}

    def bottom(k: int) -> LightconeState:
        if k not in bots:
            if k == 1:
                bots[k] = lightcone_insert(q, 0, SYM_SWAP, gram, 0)
            else:
                bots[k] = lightcone_step(bottom(k - 1), gram, (k - 1) % 2, guard)
        return bots[k]

    def top(m: int, start_parity: int) -> LightconeState:
        key = (m, start_parity)
        if key not in tops:
            if m == 1:
                tops[key] = lightcone_insert(
                    q, x_separation, SYM_ID, gram, start_parity
                )
            else:
                prev = top(m - 1, start_parity)
                tops[key] = lightcone_step(
                    prev, gram, (start_parity - (m - 1)) % 2, guard
                )
        return tops[key]

    for t in range(1, t_max + 1):
        k_bot = (t + 1) // 2
        m_top = t - k_bot
        if m_top == 0:
            out[t] = _measure_against_boundary(bottom(k_bot), gram, x_separation)
        else:
            out[t] = _middle_contract(bottom(k_bot), top(m_top, (t - 1) % 2), gram)
    return out
