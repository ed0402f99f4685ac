"""Panel renderers: data series with dashed analytic overlays.

All analytic references (infinite-time plateau, entropy-density prediction,
quadratic rate law, late-time OTOC value) come from reference columns of
the input tables, so the scripts stay decoupled from the simulator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .io import ColumnError, Table, group_by, load_table  # noqa: E402

FIGURE_IDS = ("ord", "s2_vs_t", "s2_plateau_growth", "otoc", "page")

_RC = {
    "figure.dpi": 150,
    "savefig.dpi": 150,
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "svg.hashsalt": "scarfigs",  # deterministic SVG ids
}


@dataclass
class FigureSpec:
    figure_id: str
    input_paths: list[str]
    output_image_path: str
    log_axes: bool | None = None  # override per-panel defaults
    style: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.figure_id not in FIGURE_IDS:
            raise ValueError(
                f"unknown figure id {self.figure_id!r}; choose from {FIGURE_IDS}"
            )


def _save(fig, out_path: str):
    base = Path(out_path)
    base.parent.mkdir(parents=True, exist_ok=True)
    stem = base.with_suffix("")
    fig.savefig(
        f"{stem}.png", metadata={"Software": "scarfigs"}, bbox_inches="tight"
    )
    fig.savefig(
        f"{stem}.svg", metadata={"Date": None}, bbox_inches="tight"
    )
    plt.close(fig)
    return [f"{stem}.png", f"{stem}.svg"]


def _series_by_lambda(table: Table, x: str, y: str):
    xs = table.column(x)
    ys = table.column(y)
    for lam, idx in sorted(group_by(table, "lambda").items()):
        yield lam, [xs[i] for i in idx], [ys[i] for i in idx]


def render_ord(series: Table, rates: Table, out: str, log_axes: bool | None):
    series.require("lambda", "t", "order_param", "plateau")
    rates.require("lambda", "gamma", "gamma_ref")
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(4.2, 5.4))
    for lam, ts, vals in _series_by_lambda(series, "t", "order_param"):
        top.plot(ts, vals, lw=1.2, label=f"$\\lambda$={lam:g}")
    plateau = series.column("plateau")[0]
    top.axhline(plateau, ls="--", color="k", lw=1.0, label="$1/q$")
    top.set_xlabel("t")
    top.set_ylabel(r"$\langle O(t)\rangle$")
    top.legend(fontsize=7)
    lams = np.array(rates.column("lambda"))
    gammas = np.array(rates.column("gamma"))
    refs = np.array(rates.column("gamma_ref"))
    order = np.argsort(lams)
    bottom.plot(lams[order], gammas[order], "o", ms=4, label="fit")
    bottom.plot(lams[order], refs[order], "k--", lw=1.0, label=r"$2v\lambda^2$")
    if log_axes is None or log_axes:
        bottom.set_xscale("log")
        bottom.set_yscale("log")
    bottom.set_xlabel(r"$\lambda$")
    bottom.set_ylabel(r"$\gamma$")
    bottom.legend(fontsize=7)
    fig.suptitle("order-parameter relaxation")
    return _save(fig, out)


def render_s2_vs_t(series: Table, out: str, log_axes: bool | None):
    series.require("lambda", "t", "S2")
    fig, ax = plt.subplots(figsize=(4.2, 3.0))
    for lam, ts, vals in _series_by_lambda(series, "t", "S2"):
        ax.plot(ts, vals, lw=1.2, label=f"$\\lambda$={lam:g}")
    ax.set_xlabel("t")
    ax.set_ylabel(r"$S_2$")
    ax.legend(fontsize=7, ncol=2)
    fig.suptitle("half-chain entropy growth")
    return _save(fig, out)


def render_s2_plateau_growth(
    plateau: Table, growth: Table, out: str, log_axes: bool | None
):
    plateau.require("lambda", "s2_density_fit", "page_ref")
    growth.require("lambda", "growth_rate", "page_ref")
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(4.2, 5.4))
    lams = np.array(plateau.column("lambda"))
    order = np.argsort(lams)
    dens = np.array(plateau.column("s2_density_fit"))
    ref = np.array(plateau.column("page_ref"))
    top.plot(lams[order], dens[order], "o", ms=4, label="fit")
    top.plot(lams[order], ref[order], "k--", lw=1.0, label="prediction")
    top.set_xlabel(r"$\lambda$")
    top.set_ylabel(r"$S_2/L$")
    top.legend(fontsize=7)
    glams = np.array(growth.column("lambda"))
    gorder = np.argsort(glams)
    rate = np.array(growth.column("growth_rate"))
    gref = np.array(growth.column("page_ref"))
    # no closed form for the growth rate: overlay the rescaled density curve
    scale = float(rate @ gref) / float(gref @ gref) if gref.any() else 1.0
    bottom.plot(glams[gorder], rate[gorder], "s", ms=4, label="fit")
    bottom.plot(
        glams[gorder], scale * gref[gorder], "k--", lw=1.0,
        label=f"rescaled prediction (x{scale:.3f})",
    )
    bottom.set_xlabel(r"$\lambda$")
    bottom.set_ylabel(r"growth rate of $S_2$")
    bottom.legend(fontsize=7)
    fig.suptitle("entanglement plateau and growth")
    return _save(fig, out)


def render_otoc(tables: list[Table], out: str, log_axes: bool | None):
    fig, ax = plt.subplots(figsize=(4.2, 3.0))
    for table in tables:
        table.require("q", "t", "otoc", "plateau_ref")
        q = table.column("q")[0]
        ax.plot(table.column("t"), table.column("otoc"), lw=1.2, label=f"q={q:g}")
        ax.axhline(table.column("plateau_ref")[0], ls="--", color="k", lw=1.0)
    if log_axes:
        ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel(r"$\mathbb{E}[\langle OO(t)OO(t)\rangle]$")
    ax.legend(fontsize=7)
    fig.suptitle("out-of-time-order correlator")
    return _save(fig, out)


def render_page(table: Table, out: str, log_axes: bool | None):
    table.require("lambda", "ell_over_L", "s2_density")
    fig, ax = plt.subplots(figsize=(4.2, 3.0))
    for lam, fr, vals in _series_by_lambda(table, "ell_over_L", "s2_density"):
        ax.plot(fr, vals, "--", lw=1.2, label=f"$\\lambda$={lam:g}")
    ax.set_xlabel(r"$\ell/L$")
    ax.set_ylabel(r"$S_2/L$")
    ax.legend(fontsize=7)
    fig.suptitle("entropy density profile")
    return _save(fig, out)


def render(spec: FigureSpec) -> list[str]:
    """Render one figure from its input tables; returns written paths."""
    with plt.rc_context(_RC):
        tables = [load_table(p) for p in spec.input_paths]
        if spec.figure_id == "ord":
            if len(tables) != 2:
                raise ColumnError("ord needs two inputs: series CSV and rates CSV")
            return render_ord(tables[0], tables[1], spec.output_image_path,
                              spec.log_axes)
        if spec.figure_id == "s2_vs_t":
            return render_s2_vs_t(tables[0], spec.output_image_path, spec.log_axes)
        if spec.figure_id == "s2_plateau_growth":
            if len(tables) != 2:
                raise ColumnError(
                    "s2_plateau_growth needs two inputs: plateau CSV and growth CSV"
                )
            return render_s2_plateau_growth(
                tables[0], tables[1], spec.output_image_path, spec.log_axes
            )
        if spec.figure_id == "otoc":
            return render_otoc(tables, spec.output_image_path, spec.log_axes)
        return render_page(tables[0], spec.output_image_path, spec.log_axes)
