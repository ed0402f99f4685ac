"""Reproducible experiment driver.

One subcommand per experiment family; every output file carries a header
echoing the full parameter set (including the seed and package version) and
reruns with identical flags are byte-identical.  CSV files use `#`-prefixed
header lines, comma separators and 12 significant digits; `--format json`
writes the same header/columns/rows structure as JSON.

Exit codes: 0 success, 1 usage error, 2 size guard, 3 oracle-check failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analytics import otoc_plateau, page_curve
from .channels import estimate_channel, scar_pair_weights
from .exceptions import SizeGuardError
from .gram import build_gram_data
from .interface import analytic_profile, simulate_interface, velocity_diffusion
from .lightcone import otoc_series
from .oracle import evolve_exact_oracle
from .orderparam import (
    PerturbationParams,
    default_fit_window,
    finite_chain_order_parameter,
    fit_exponential_tail,
    order_parameter_series,
)
from .pairstate import (
    apply_layer,
    finite_otoc_series,
    half_chain_region,
    initial_state,
    measure_purity,
    measure_renyi2,
)
from .rng import stream

Z_FLOOR = 1e-12  # stderr floor when a comparison row is deterministic


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); the contract wants 1
        raise UsageError(message)


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _write_table(path: str, fmt: str, header: dict, columns: list[str], rows):
    text_rows = [[_fmt(v) for v in row] for row in rows]
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        lines = [f"# {k}={_fmt(v)}" for k, v in header.items()]
        lines.append(",".join(columns))
        lines.extend(",".join(r) for r in text_rows)
        out.write_text("\n".join(lines) + "\n")
    else:
        payload = {"header": {k: _fmt(v) for k, v in header.items()},
                   "columns": columns, "rows": text_rows}
        out.write_text(json.dumps(payload, indent=1) + "\n")


def _header(args, subcommand: str, **extra) -> dict:
    h = {"artifact": "scarcircuit", "version": __version__, "subcommand": subcommand}
    for key in ("q", "lam", "lambda_grid", "L", "t_max", "samples", "seed",
                "region", "separation", "panel"):
        if hasattr(args, key) and getattr(args, key) is not None:
            name = {"lam": "lambda"}.get(key, key)
            val = getattr(args, key)
            if isinstance(val, (list, tuple)):
                val = ",".join(_fmt(v) for v in val)
            h[name] = val
    h.update(extra)
    return h


def _derived_path(out: str, suffix: str, fmt: str) -> str:
    p = Path(out)
    ext = ".json" if fmt == "json" else ".csv"
    return str(p.with_name(p.stem + suffix + ext))


# ---------------------------------------------------------------------------


def cmd_interface(args) -> int:
    ens = simulate_interface(
        args.q, args.t_max, args.samples, stream(args.seed), seed=args.seed,
        snapshot_times=args.profile_times,
    )
    vd = velocity_diffusion(args.q)
    rows = []
    for i in range(args.t_max):
        t = i + 1
        rows.append([
            t, ens.mean[i], ens.var[i], ens.mean[i] / t, ens.var[i] / t, vd.v, vd.D,
        ])
    _write_table(
        args.out, args.format, _header(args, "interface"),
        ["t", "mean", "var", "v_fit", "D_fit", "v_exact", "D_exact"], rows,
    )
    value_inf = 1.0 / args.q
    prows = []
    for t in args.profile_times:
        if not 1 <= t <= args.t_max:
            continue
        pos = ens.snapshots[t]
        span = int(np.ceil(4 * np.sqrt(vd.D * t)))
        center = int(round(vd.v * t))
        for x in range(center - span, center + span + 1):
            emp = float(np.mean(pos <= x)) * 1.0 + float(np.mean(pos > x)) * value_inf
            prows.append([t, x, emp, analytic_profile(x, t, args.q, 1.0, value_inf)])
    _write_table(
        _derived_path(args.out, "_profile", args.format), args.format,
        _header(args, "interface", panel="profile"),
        ["t", "x", "empirical", "analytic"], prows,
    )
    return 0


def cmd_order_param(args) -> int:
    rows, rate_rows = [], []
    v = velocity_diffusion(args.q).v
    for lam in args.lambda_grid:
        params = PerturbationParams(args.q, lam)
        series = order_parameter_series(params, args.t_max)
        for t, val in enumerate(series):
            rows.append([lam, t, val, 1.0 / args.q])
        if lam > 0:
            window = default_fit_window(params)
            try:
                gamma, c = fit_exponential_tail(params, window)
                rate_rows.append(
                    [lam, gamma, 2 * v * lam * lam, c, window[0], window[1]]
                )
            except Exception:
                pass  # plateau reached within machine precision; no rate row
    _write_table(
        args.out, args.format, _header(args, "order-param"),
        ["lambda", "t", "order_param", "plateau"], rows,
    )
    _write_table(
        _derived_path(args.out, "_rates", args.format), args.format,
        _header(args, "order-param", panel="rates"),
        ["lambda", "gamma", "gamma_ref", "C", "fit_start", "fit_end"], rate_rows,
    )
    return 0


def _parse_region(region: str | None, L: int) -> range:
    if region is None:
        return half_chain_region(L)
    lo, hi = region.split(":")
    return range(int(lo), int(hi))


def cmd_renyi(args) -> int:
    gram = build_gram_data(args.q)
    panels = (
        ["s2_vs_t", "plateau_growth", "page"] if args.panel == "all" else [args.panel]
    )
    region = _parse_region(args.region, args.L)

    if "s2_vs_t" in panels:
        rows = []
        for lam in args.lambda_grid:
            st = initial_state(args.L, args.q, lam, gram)
            rows.append([lam, 0, 0.0])
            rows.append([lam, 1, measure_renyi2(st, gram, region)])
            for t in range(2, args.t_max + 1):
                st = apply_layer(st, gram)
                rows.append([lam, t, measure_renyi2(st, gram, region)])
        _write_table(
            _derived_path(args.out, "_s2_vs_t", args.format), args.format,
            _header(args, "renyi", panel="s2_vs_t"),
            ["lambda", "t", "S2"], rows,
        )

    if "plateau_growth" in panels:
        # density: linear fit S2 = a L + b at fixed late time over the L grid
        plateau_rows = []
        sizes = args.L_grid
        for lam in args.lambda_grid:
            vals = []
            for L in sizes:
                st = initial_state(L, args.q, lam, gram)
                for _ in range(args.t_max - 1):
                    st = apply_layer(st, gram)
                vals.append(measure_renyi2(st, gram, half_chain_region(L)))
            slope, _ = np.polyfit(sizes, vals, 1)
            plateau_rows.append([lam, slope, page_curve(args.q, lam, 0.5)])
        _write_table(
            _derived_path(args.out, "_plateau", args.format), args.format,
            _header(args, "renyi", panel="plateau", L_grid=",".join(map(str, sizes))),
            ["lambda", "s2_density_fit", "page_ref"], plateau_rows,
        )
        # growth: linear fit S2 = a t + b on t in [0, 20] at fixed L
        growth_rows = []
        t_fit = min(20, args.t_max)
        for lam in args.lambda_grid:
            series = [0.0]
            st = initial_state(args.L, args.q, lam, gram)
            series.append(measure_renyi2(st, gram, half_chain_region(args.L)))
            for _ in range(2, t_fit + 1):
                st = apply_layer(st, gram)
                series.append(measure_renyi2(st, gram, half_chain_region(args.L)))
            slope, _ = np.polyfit(np.arange(t_fit + 1), series, 1)
            growth_rows.append([lam, slope, page_curve(args.q, lam, 0.5)])
        _write_table(
            _derived_path(args.out, "_growth", args.format), args.format,
            _header(args, "renyi", panel="growth", t_fit=t_fit),
            ["lambda", "growth_rate", "page_ref"], growth_rows,
        )

    if "page" in panels:
        rows = []
        for lam in args.lambda_grid:
            for i in range(0, 51):
                frac = i / 50.0
                rows.append([lam, frac, page_curve(args.q, lam, frac)])
        _write_table(
            _derived_path(args.out, "_page", args.format), args.format,
            _header(args, "renyi", panel="page"),
            ["lambda", "ell_over_L", "s2_density"], rows,
        )
    return 0


def cmd_otoc(args) -> int:
    series = otoc_series(args.q, args.separation, args.t_max)
    plateau = otoc_plateau(args.q).plateau
    rows = [[args.q, t, series[t], plateau] for t in range(args.t_max + 1)]
    _write_table(
        args.out, args.format, _header(args, "otoc"),
        ["q", "t", "otoc", "plateau_ref"], rows,
    )
    return 0


def cmd_oracle_check(args) -> int:
    q, L, t_max, samples = args.q, args.L, args.t_max, args.samples
    gram = build_gram_data(q)
    site = L // 2 if (L // 2) % 2 == 0 else L // 2 + 1
    rows = []

    def push(label, replica, mean, se):
        z = 0.0 if mean == replica else (mean - replica) / max(se, Z_FLOOR)
        rows.append([label, replica, mean, se, z])

    # the pinned region spawned at `site` first touches an open end only
    # after min(s0, L-1-s0) layers (s0 = its layer-0 gate start), so the
    # infinite-chain transfer value is exact up to there
    s0 = site - (site % 2)
    t_free = min(s0, L - 1 - s0)
    seed_i = 0
    for lam in args.lambda_grid:
        params = PerturbationParams(q, lam)
        transfer_series = order_parameter_series(params, t_max)
        res = evolve_exact_oracle(
            L, q, t_max, ("product", lam), ("order_parameter", site),
            samples, args.seed + seed_i,
        )
        seed_i += 1
        for t in range(1, t_max + 1):
            rep = finite_chain_order_parameter(q, L, site, t, lam)
            push(f"order_param[lambda={lam:g};t={t}]", rep, res.mean(t),
                 res.stderr(t))
        for t in range(1, min(t_free, t_max) + 1):
            push(f"order_param_transfer[lambda={lam:g};t={t}]",
                 float(transfer_series[t]), res.mean(t), res.stderr(t))

        res = evolve_exact_oracle(
            L, q, t_max, ("product", lam), ("half_chain_purity",),
            samples, args.seed + seed_i,
        )
        seed_i += 1
        st = initial_state(L, q, lam, gram)
        for t in range(1, t_max + 1):
            rep = measure_purity(st, gram, half_chain_region(L))
            push(f"purity[lambda={lam:g};t={t}]", rep, res.mean(t), res.stderr(t))
            if t < t_max:
                st = apply_layer(st, gram)

    res = evolve_exact_oracle(
        L, q, t_max, ("infinite_temperature",), ("otoc", site, site),
        samples, args.seed + seed_i,
    )
    replica_otoc = finite_otoc_series(q, L, site, site, t_max, gram)
    for t in range(t_max + 1):
        push(f"otoc[t={t}]", float(replica_otoc[t]), res.mean(t), res.stderr(t))

    ch = estimate_channel(q, 1, samples, stream(args.seed, 10**6))
    w = scar_pair_weights(ch)
    push("channel_weight_scar_pair", 1.0 / (q + 1),
         w["weight_scar_pair"], w["stderr_scar_pair"])
    push("channel_weight_inf_pair", q / (q + 1),
         w["weight_inf_pair"], w["stderr_inf_pair"])

    worst = max(abs(r[4]) for r in rows)
    _write_table(
        args.out, args.format,
        _header(args, "oracle-check", max_abs_z=worst, threshold=5.0),
        ["quantity", "replica_value", "oracle_mean", "oracle_stderr", "z_score"],
        rows,
    )
    if worst > 5.0:
        print(f"oracle check FAILED: max |z| = {worst:.3g} > 5", file=sys.stderr)
        return 3
    return 0


# ---------------------------------------------------------------------------


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x != ""]


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x != ""]


def build_parser() -> _Parser:
    parser = _Parser(prog="scarcircuit", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, samples_default=None):
        p.add_argument("--q", type=int, default=2, help="local dimension (>= 2)")
        p.add_argument("--seed", type=int, default=7)
        p.add_argument("--out", required=True, help="output file path")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        if samples_default is not None:
            p.add_argument("--samples", type=int, default=samples_default)

    p = sub.add_parser("interface", help="interface walk statistics and profile")
    common(p, samples_default=100_000)
    p.add_argument("--t-max", type=int, default=200)
    p.add_argument("--profile-times", type=_int_list, default=[50, 100, 200],
                   help="layers at which to tabulate the spatial profile")
    p.set_defaults(func=cmd_interface)

    p = sub.add_parser("order-param", help="order-parameter relaxation series")
    common(p)
    p.add_argument("--t-max", type=int, default=400)
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="single perturbation strength (overrides the grid)")
    p.add_argument("--lambda-grid", type=_float_list,
                   default=[0.1, 0.25, 0.5, 0.75, 1.0])
    p.set_defaults(func=cmd_order_param)

    p = sub.add_parser("renyi", help="Renyi-2 growth, plateau and Page curve")
    common(p)
    p.add_argument("--t-max", type=int, default=50)
    p.add_argument("--L", type=int, default=12)
    p.add_argument("--L-grid", type=_int_list, default=[6, 8, 10, 12])
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--lambda-grid", type=_float_list,
                   default=[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0])
    p.add_argument("--region", default=None,
                   help="contiguous site range 'lo:hi' (default: half chain)")
    p.add_argument("--panel", choices=("all", "s2_vs_t", "plateau_growth", "page"),
                   default="all")
    p.set_defaults(func=cmd_renyi)

    p = sub.add_parser("otoc", help="infinite-chain OTOC series")
    common(p)
    p.add_argument("--t-max", type=int, default=14)
    p.add_argument("--separation", type=int, default=0)
    p.set_defaults(func=cmd_otoc)

    p = sub.add_parser("oracle-check", help="replica predictions vs sampled circuits")
    common(p, samples_default=2000)
    p.add_argument("--t-max", type=int, default=6)
    p.add_argument("--L", type=int, default=8)
    p.add_argument("--lambda-grid", type=_float_list, default=[0.0, 0.5])
    p.set_defaults(func=cmd_oracle_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "samples", 1) is not None and getattr(args, "samples", 1) < 1:
            raise UsageError("--samples must be a positive integer")
        if getattr(args, "lam", None) is not None:
            args.lambda_grid = [args.lam]
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SizeGuardError as exc:
        print(f"size guard: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
