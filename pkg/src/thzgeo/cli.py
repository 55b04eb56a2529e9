"""Command-line front end: parameter sweeps and machine-readable datasets.

Subcommands
-----------
lt             Averaged interference Laplace transform vs. transform variable.
coverage       Rate-coverage probability vs. threshold, four network modes.
assoc          THz association probability vs. a swept parameter.
optimize-bias  Coverage-maximizing association bias vs. a swept parameter.
figures        Regenerate the six reference datasets and their manifest.

All outputs are deterministic: rerunning a command with the same
configuration and seed produces byte-identical files, regardless of
THZGEO_THREADS (which only caps the Monte Carlo worker pool).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np
from scipy.integrate import quad

from . import __version__
from .analytic import (
    LtOptions,
    assoc_prob_thz_asymptotic,
    assoc_prob_thz_quadrature,
    assoc_prob_thz_series,
    coverage_coexisting,
    coverage_hybrid,
    coverage_rf_only,
    coverage_thz_only,
    lt_thz_average,
    mean_interference_thz,
)
from .config import (
    DEFAULT_RAW,
    KNOWN_KEYS,
    RunConfig,
    SweepSpec,
    build_config,
    curve_overrides,
    parse_grid,
    parse_quantity,
    parse_sweep_expr,
    read_config_text,
    sweep_from_config,
)
from .csvio import write_table
from .errors import ConfigError, ThzGeoError
from .mcsim import estimate_association, estimate_coverage, estimate_lt
from .netmodel import derive_constants, sinr_threshold
from .optimize import BiasSearchSpec, optimize_bias

FIGURE_NAMES = ("fig1a", "fig1b", "fig1c", "fig2a", "fig2b", "fig2c")
_FIGURE_COMMANDS = {
    "fig1a": "lt",
    "fig1b": "lt",
    "fig1c": "coverage",
    "fig2a": "assoc",
    "fig2b": "coverage",
    "fig2c": "coverage",
}


def _threads() -> int:
    raw = os.environ.get("THZGEO_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"THZGEO_THREADS must be an integer, got {raw!r}")


def _merge_raw(base: dict[str, str], overrides: dict[str, str]) -> dict[str, str]:
    merged = dict(base)
    for key, value in overrides.items():
        if key not in KNOWN_KEYS:
            raise ConfigError(f"unknown configuration key {key!r}")
        merged[key] = value
    return merged


def _curves(
    raw: dict[str, str], sweep: SweepSpec | None = None
) -> list[tuple[str, dict[str, str]]]:
    """Per-curve overrides; a sweep turns into one synthetic curve per value."""
    curves = curve_overrides(raw)
    if sweep is not None:
        if curves:
            raise ConfigError("use either curve overrides or a sweep, not both")
        leaf = sweep.key.split(".")[-1]
        return [
            (f"{leaf}_{format(v, 'g')}", {sweep.key: format(v, ".17g")})
            for v in sweep.values
        ]
    return curves if curves else [("", {})]


def _auto_s_grid(cfg: RunConfig, count: int) -> list[float]:
    """Log grid of transform variables spanning s * E[I] in [0.02, 5]."""
    beta = math.pi * cfg.params.lambda_t
    mean, _ = quad(
        lambda u: math.exp(-u) * float(mean_interference_thz(math.sqrt(u / beta), cfg.params)),
        1e-12,
        38.0,
        limit=200,
    )
    return [float(u) / mean for u in np.geomspace(0.02, 5.0, count)]


def _s_grid(cfg: RunConfig) -> list[float]:
    expr = cfg.get("lt.s_grid") or "auto:20"
    expr = expr.strip()
    if expr.startswith("auto"):
        count = int(expr.split(":", 1)[1]) if ":" in expr else 20
        return _auto_s_grid(cfg, count)
    return parse_grid(expr, "lt.s_grid")


def run_lt(raw: dict[str, str], sweep: SweepSpec | None = None):
    base = build_config(raw)
    columns = ["curve", "s", "lt_analytic_l1", "lt_analytic_l3", "lt_mc", "lt_mc_ci95"]
    rows: list[list] = []
    flags: list[str] = []
    threads = _threads()
    for name, overrides in _curves(raw, sweep):
        cfg = build_config(_merge_raw(raw, overrides))
        for s in _s_grid(cfg):
            cells: list = [name, s]
            for level in (1, 3):
                opts = LtOptions(truncation_L=level, adaptive=False, term_rel_tol=1e-12)
                try:
                    value, _fb = lt_thz_average(s, cfg.params, opts, cfg.quad)
                    cells.append(value)
                except ThzGeoError as exc:
                    cells.append(None)
                    flags.append(f"curve={name or '-'} s={s:g} L{level}: {exc}")
                    print(f"warning: lt analytic failed at s={s:g}: {exc}", file=sys.stderr)
            est = estimate_lt(s, cfg.params, cfg.mc, threads=threads)
            cells.extend([est.mean, est.ci95_halfwidth])
            rows.append(cells)
    return base, columns, rows, flags


def _coverage_grid(cfg: RunConfig) -> list[tuple[float, float, float]]:
    """(x, tau_thz, tau_rf) rows from either a shared SINR grid or a rate grid."""
    rate_expr = cfg.get("coverage.rate_grid")
    if rate_expr:
        rates = parse_grid(rate_expr, "coverage.rate_grid")
        return [
            (r, sinr_threshold(r, cfg.params.w_t), sinr_threshold(r, cfg.params.w_r))
            for r in rates
        ]
    taus = parse_grid(cfg.get("coverage.thresholds"), "coverage.thresholds")
    return [(t, t, t) for t in taus]


def run_coverage(raw: dict[str, str], sweep: SweepSpec | None = None):
    base = build_config(raw)
    columns = [
        "curve",
        "x",
        "tau_t",
        "tau_r",
        "coverage_analytic",
        "coverage_mc",
        "coverage_mc_ci95",
        "bias_used",
        "terms_used",
        "quad_error",
    ]
    rows: list[list] = []
    flags: list[str] = []
    threads = _threads()
    for name, overrides in _curves(raw, sweep):
        cfg = build_config(_merge_raw(raw, overrides))
        mode = cfg.get("coverage.mode")
        grid = _coverage_grid(cfg)
        bias_expr = cfg.get("coverage.bias_list")
        biases = None
        # the association bias only enters the coexisting mode; other modes
        # ignore the list rather than spawning per-row parameter variants
        if bias_expr and mode == "coexisting":
            biases = parse_grid(bias_expr, "coverage.bias_list")
            if len(biases) != len(grid):
                raise ConfigError(
                    "coverage.bias_list length must match the threshold grid "
                    f"({len(biases)} vs {len(grid)})"
                )
        for i, (x, tau_t, tau_r) in enumerate(grid):
            params = cfg.params if biases is None else cfg.params.with_bias(biases[i])
            result = None
            try:
                if mode == "thz_only":
                    result = coverage_thz_only(params, tau_t, cfg.gp, cfg.lt)
                elif mode == "rf_only":
                    result = coverage_rf_only(params, tau_r, cfg.quad)
                elif mode == "coexisting":
                    result = coverage_coexisting(params, tau_t, tau_r, cfg.gp, cfg.lt, cfg.quad)
                else:
                    result = coverage_hybrid(params, tau_t, tau_r, cfg.gp, cfg.lt, cfg.quad)
            except ThzGeoError as exc:
                flags.append(f"curve={name or '-'} x={x:g} analytic: {exc}")
                print(f"warning: coverage analytic failed at x={x:g}: {exc}", file=sys.stderr)
            mc_params = params.with_bias(0.0) if mode == "rf_only" else params
            mc_rule = {
                "thz_only": "nearest_thz",
                "rf_only": "brsp",
                "coexisting": "brsp",
                "hybrid": "hybrid",
            }[mode]
            mc_cfg = replace(cfg.mc, association_rule=mc_rule)
            est = estimate_coverage(mc_params, mc_cfg, tau_t, tau_r, threads=threads)
            rows.append(
                [
                    name,
                    x,
                    tau_t,
                    tau_r,
                    None if result is None else result.probability,
                    est.mean,
                    est.ci95_halfwidth,
                    params.b_t,
                    None if result is None else result.diagnostics.terms_used,
                    None if result is None else result.diagnostics.estimated_error,
                ]
            )
    return base, columns, rows, flags


def run_assoc(raw: dict[str, str], sweep: SweepSpec | None):
    base = build_config(raw)
    sweep = sweep or sweep_from_config(raw)
    if sweep is None:
        raise ConfigError("assoc needs a sweep (sweep.key/sweep.grid or --sweep)")
    leaf = sweep.key.split(".")[-1]
    columns = [
        "curve",
        leaf,
        "p_assoc_quadrature",
        "p_assoc_series",
        "p_assoc_asymptotic",
        "p_assoc_mc",
        "p_assoc_mc_ci95",
        "bias_used",
        "series_flag",
    ]
    rows: list[list] = []
    flags: list[str] = []
    threads = _threads()
    for name, overrides in _curves(raw):
        merged = _merge_raw(raw, overrides)
        bias_expr = merged.get("assoc.bias_list")
        biases = None
        if bias_expr:
            biases = parse_grid(bias_expr, "assoc.bias_list")
            if len(biases) != len(sweep.values):
                raise ConfigError(
                    "assoc.bias_list length must match the sweep grid "
                    f"({len(biases)} vs {len(sweep.values)})"
                )
        for i, value in enumerate(sweep.values):
            point = dict(merged)
            point[sweep.key] = format(value, ".17g")
            if biases is not None:
                point["network.b_t"] = format(biases[i], ".17g")
            cfg = build_config(point)
            if cfg.mc.association_rule not in ("brsp", "rsrp"):
                raise ConfigError("assoc needs mc.association_rule brsp or rsrp")
            p_quad = assoc_prob_thz_quadrature(cfg.params, cfg.quad)
            series_flag = ""
            try:
                p_series = assoc_prob_thz_series(cfg.params, cfg.series)
            except ThzGeoError as exc:
                p_series = None
                series_flag = "divergent"
                flags.append(f"curve={name or '-'} {leaf}={value:g} series: {exc}")
            try:
                p_asym = assoc_prob_thz_asymptotic(cfg.params, cfg.series)
            except ThzGeoError as exc:
                p_asym = None
                series_flag = (series_flag + "+asymptotic").lstrip("+")
                flags.append(f"curve={name or '-'} {leaf}={value:g} asymptotic: {exc}")
            est = estimate_association(cfg.params, cfg.mc, threads=threads)
            rows.append(
                [
                    name,
                    value,
                    p_quad,
                    p_series,
                    p_asym,
                    est.mean,
                    est.ci95_halfwidth,
                    cfg.params.b_t,
                    series_flag,
                ]
            )
    return base, columns, rows, flags


def _optimize_taus(cfg: RunConfig) -> tuple[float, float]:
    expr = (cfg.get("optimize.tau") or "rate").strip()
    if expr.lower() == "rate":
        derived = derive_constants(cfg.params)
        return derived.tau_t, derived.tau_r
    tau = parse_quantity(expr, "optimize.tau")
    return tau, tau


def run_optimize(raw: dict[str, str], sweep: SweepSpec | None):
    base = build_config(raw)
    sweep = sweep or sweep_from_config(raw)
    if sweep is None:
        raise ConfigError("optimize-bias needs a sweep (sweep.key/sweep.grid or --sweep)")
    leaf = sweep.key.split(".")[-1]
    columns = [
        "curve",
        leaf,
        "b_star",
        "coverage_at_b_star",
        "flat_flag",
        "multimodal_flag",
    ]
    rows: list[list] = []
    flags: list[str] = []
    for name, overrides in _curves(raw):
        merged = _merge_raw(raw, overrides)
        for value in sweep.values:
            point = dict(merged)
            point[sweep.key] = format(value, ".17g")
            cfg = build_config(point)
            tau_t, tau_r = _optimize_taus(cfg)
            spec = BiasSearchSpec(
                log10_b_min=float(cfg.get("optimize.log10_b_min")),
                log10_b_max=float(cfg.get("optimize.log10_b_max")),
                grid_points=int(cfg.get("optimize.grid_points")),
                refine_tol=parse_quantity(cfg.get("optimize.refine_tol"), "optimize.refine_tol"),
            )

            def evaluator(params):
                res = coverage_coexisting(params, tau_t, tau_r, cfg.gp, cfg.lt, cfg.quad)
                return res.probability, max(res.diagnostics.estimated_error, 1e-7)

            try:
                result = optimize_bias(cfg.params, spec, evaluator)
            except ThzGeoError as exc:
                flags.append(f"curve={name or '-'} {leaf}={value:g} optimize: {exc}")
                rows.append([name, value, None, None, None, None])
                continue
            rows.append(
                [
                    name,
                    value,
                    result.b_star,
                    result.coverage_at_b_star,
                    result.flat_objective,
                    result.multimodal,
                ]
            )
    return base, columns, rows, flags


_RUNNERS = {
    "lt": run_lt,
    "coverage": run_coverage,
    "assoc": run_assoc,
    "optimize-bias": run_optimize,
}


def _load_raw(config_path: str | None) -> dict[str, str]:
    if config_path is None:
        return {}
    text = Path(config_path).read_text(encoding="utf-8")
    return read_config_text(text)


def _cli_overrides(args) -> dict[str, str]:
    overrides: dict[str, str] = {}
    if args.trials is not None:
        overrides["mc.trials"] = str(args.trials)
    if args.seed is not None:
        overrides["mc.master_seed"] = str(args.seed)
    if getattr(args, "terms", None) is not None:
        overrides["lt.truncation"] = str(args.terms)
        overrides["lt.adaptive"] = "false"
    return overrides


def _run_and_write(command: str, raw: dict[str, str], sweep, out: str, fmt: str) -> int:
    base, columns, rows, flags = _RUNNERS[command](raw, sweep)
    write_table(
        out,
        version=__version__,
        command=command,
        config_pairs=base.raw,
        curve_pairs=curve_overrides(raw),
        columns=columns,
        rows=rows,
        fmt=fmt,
    )
    if flags:
        print(json.dumps({"command": command, "flagged_rows": flags}), file=sys.stderr)
        return 2
    return 0


def _figure_config_text(name: str, config_dir: str | None) -> str:
    if config_dir is not None:
        return (Path(config_dir) / f"{name}.cfg").read_text(encoding="utf-8")
    from importlib import resources

    return (resources.files("thzgeo") / "figconfigs" / f"{name}.cfg").read_text(
        encoding="utf-8"
    )


def run_figures(config_dir: str | None, out_dir: str, fmt: str) -> int:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = {"tool": "thzgeo", "version": __version__, "figures": []}
    exit_code = 0
    for name in FIGURE_NAMES:
        command = _FIGURE_COMMANDS[name]
        entry: dict = {"name": name, "command": command}
        started = time.perf_counter()
        try:
            text = _figure_config_text(name, config_dir)
            entry["config_sha256"] = hashlib.sha256(text.encode("utf-8")).hexdigest()
            raw = read_config_text(text)
            csv_path = out / f"{name}.{ 'json' if fmt == 'json' else 'csv'}"
            code = _run_and_write(command, raw, None, str(csv_path), fmt)
            entry["output"] = csv_path.name
            entry["output_sha256"] = hashlib.sha256(csv_path.read_bytes()).hexdigest()
            entry["rows"] = sum(1 for _ in csv_path.read_text().splitlines())
            entry["flagged"] = code != 0
            if code != 0:
                exit_code = 2
        except Exception as exc:  # partial-failure manifest entries
            entry["error"] = f"{type(exc).__name__}: {exc}"
            exit_code = 2
        entry["runtime_s"] = round(time.perf_counter() - started, 3)
        manifest["figures"].append(entry)
    (out / "manifest.json").write_text(
        json.dumps(manifest, sort_keys=True, indent=1) + "\n", encoding="utf-8"
    )
    return exit_code


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="thzgeo",
        description="Interference, association, and coverage analytics for "
        "coexisting RF/THz networks, with Monte Carlo validation.",
    )
    parser.add_argument("--version", action="version", version=f"thzgeo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, terms=False):
        p.add_argument("--config", help="configuration file (key = value lines)")
        p.add_argument("--out", required=True, help="output path")
        p.add_argument("--trials", type=int, help="override mc.trials")
        p.add_argument("--seed", type=int, help="override mc.master_seed")
        p.add_argument(
            "--sweep", help="sweep expression key=start:stop:count:scale or key=v1,v2,..."
        )
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        if terms:
            p.add_argument("--terms", type=int, help="fixed LT truncation level")

    common(sub.add_parser("lt", help="averaged interference Laplace transform"), terms=True)
    common(sub.add_parser("coverage", help="rate-coverage probability"), terms=True)
    common(sub.add_parser("assoc", help="THz association probability"))
    common(sub.add_parser("optimize-bias", help="coverage-maximizing bias"))

    figs = sub.add_parser("figures", help="regenerate the six reference datasets")
    figs.add_argument("--config-dir", help="directory of figure configs (default: shipped)")
    figs.add_argument("--out", required=True, help="output directory")
    figs.add_argument("--format", choices=("csv", "json"), default="csv")

    args = parser.parse_args(argv)
    try:
        if args.command == "figures":
            return run_figures(args.config_dir, args.out, args.format)
        raw = _load_raw(args.config)
        raw = _merge_raw_with_curves(raw, _cli_overrides(args))
        sweep = parse_sweep_expr(args.sweep) if args.sweep else None
        return _run_and_write(args.command, raw, sweep, args.out, args.format)
    except ConfigError as exc:
        print(json.dumps({"error": "config", "detail": str(exc)}), file=sys.stderr)
        return 1
    except ThzGeoError as exc:
        print(
            json.dumps({"error": type(exc).__name__, "detail": str(exc)}), file=sys.stderr
        )
        return 1


def _merge_raw_with_curves(raw: dict[str, str], overrides: dict[str, str]) -> dict[str, str]:
    """Merge CLI overrides while keeping curve.* keys intact."""
    merged = dict(raw)
    for key, value in overrides.items():
        if key not in KNOWN_KEYS:
            raise ConfigError(f"unknown configuration key {key!r}")
        merged[key] = value
    return merged


if __name__ == "__main__":
    sys.exit(main())
