"""Flat key = value configuration files for the CLI.

Files are UTF-8 text, one ``section.key = value`` pair per line, ``#``
comments.  Unknown keys are rejected by name.  Values may carry unit
suffixes (THz/GHz/MHz/kHz/Hz, Gbps/Mbps/kbps/bps, dB) and grids are written
``start:stop:count:scale`` with scale lin, log, or db, or as comma lists.

Per-curve overrides use the prefix ``curve.<name>.<key> = value``; each curve
re-applies its overrides on top of the base configuration, which is how one
file describes a multi-curve figure.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .analytic import GilPelaezOptions, LtOptions, SeriesOptions
from .errors import ConfigError
from .mcsim import ASSOCIATION_RULES, GAIN_MODES, RF_FAR_FIELD_MODES, McConfig
from .netmodel import AntennaPattern, NetworkParams, thermal_noise
from .specfun import QuadratureSpec

_QUANTITY_RE = re.compile(
    r"^\s*([-+0-9.eE]+)\s*(THz|GHz|MHz|kHz|Hz|Gbps|Mbps|kbps|bps|dB)?\s*$"
)
_SCALES = {
    "THz": 1e12,
    "GHz": 1e9,
    "MHz": 1e6,
    "kHz": 1e3,
    "Hz": 1.0,
    "Gbps": 1e9,
    "Mbps": 1e6,
    "kbps": 1e3,
    "bps": 1.0,
}


def parse_quantity(text: str, key: str = "") -> float:
    match = _QUANTITY_RE.match(text)
    if not match:
        raise ConfigError(f"{key}: cannot parse quantity {text!r}")
    try:
        value = float(match.group(1))
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse number {match.group(1)!r}") from exc
    unit = match.group(2)
    if unit is None:
        return value
    if unit == "dB":
        return 10.0 ** (value / 10.0)
    return value * _SCALES[unit]


def parse_bool(text: str, key: str = "") -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {text!r}")


def parse_int(text: str, key: str = "") -> int:
    try:
        return int(text.strip(), 0)
    except ValueError as exc:
        raise ConfigError(f"{key}: expected an integer, got {text!r}") from exc


def parse_grid(text: str, key: str = "") -> list[float]:
    """Grid expression: 'start:stop:count:scale' or a comma list of quantities."""
    text = text.strip()
    if ":" in text and "," not in text:
        parts = text.split(":")
        if len(parts) != 4:
            raise ConfigError(f"{key}: grid must be start:stop:count:scale, got {text!r}")
        start = parse_quantity(parts[0], key)
        stop = parse_quantity(parts[1], key)
        count = parse_int(parts[2], key)
        scale = parts[3].strip().lower()
        if count < 1:
            raise ConfigError(f"{key}: grid count must be >= 1")
        if count == 1:
            values = [start]
        elif scale in ("lin", "db"):
            values = list(np.linspace(start, stop, count))
        elif scale == "log":
            if start <= 0.0 or stop <= 0.0:
                raise ConfigError(f"{key}: log grids need positive endpoints")
            values = list(np.geomspace(start, stop, count))
        else:
            raise ConfigError(f"{key}: grid scale must be lin, log, or db, got {scale!r}")
        if scale == "db":
            values = [10.0 ** (v / 10.0) for v in values]
        return [float(v) for v in values]
    return [parse_quantity(part, key) for part in text.split(",") if part.strip()]


# key -> parser tag; "quantity", "int", "bool", "grid", "str"
KNOWN_KEYS: dict[str, str] = {
    "network.lambda_t": "quantity",
    "network.lambda_r": "quantity",
    "network.lambda_u": "quantity",
    "network.p_t": "quantity",
    "network.p_r": "quantity",
    "network.f_t": "quantity",
    "network.f_r": "quantity",
    "network.k_a": "quantity",
    "network.alpha": "quantity",
    "network.w_t": "quantity",
    "network.w_r": "quantity",
    "network.r_th": "quantity",
    "network.n0_t": "str",  # quantity or "auto" (thermal noise for w_t)
    "network.n0_r": "quantity",
    "network.b_t": "quantity",
    "network.tx_gain_db": "quantity_raw",
    "network.tx_gain_min_db": "quantity_raw",
    "network.tx_beamwidth_deg": "str",  # degrees or "auto" (2 pi / g_max)
    "network.rx_gain_db": "quantity_raw",
    "network.rx_gain_min_db": "quantity_raw",
    "network.rx_beamwidth_deg": "str",
    "mc.trials": "int",
    "mc.master_seed": "int",
    "mc.disc_radius": "quantity",
    "mc.gain_mode": "str",
    "mc.association_rule": "str",
    "mc.rf_far_field": "str",
    "lt.truncation": "int",
    "lt.adaptive": "bool",
    "lt.term_rel_tol": "quantity",
    "lt.s_grid": "str",  # grid expression or "auto:<count>"
    "series.truncation": "int",
    "series.divergence_guard": "quantity",
    "gp.omega_max": "quantity",
    "quad.abs_tol": "quantity",
    "quad.rel_tol": "quantity",
    "quad.max_subdivisions": "int",
    "outer_quad.abs_tol": "quantity",
    "outer_quad.rel_tol": "quantity",
    "outer_quad.max_subdivisions": "int",
    "coverage.mode": "str",  # thz_only | rf_only | coexisting | hybrid
    "coverage.thresholds": "grid",  # shared linear-SINR grid for both tiers
    "coverage.rate_grid": "grid",  # alternative: rates, per-tier thresholds
    "coverage.bias_list": "grid",  # per-threshold biases (len must match grid)
    "assoc.bias_list": "grid",  # per-sweep-point biases (len must match sweep)
    "optimize.log10_b_min": "quantity_raw",
    "optimize.log10_b_max": "quantity_raw",
    "optimize.grid_points": "int",
    "optimize.refine_tol": "quantity",
    "optimize.tau": "str",  # linear SINR, value with dB suffix, or "rate"
    "sweep.key": "str",
    "sweep.grid": "grid",
}

COVERAGE_MODES = ("thz_only", "rf_only", "coexisting", "hybrid")

# network keys a sweep or curve override may target
SWEEPABLE_KEYS = tuple(k for k in KNOWN_KEYS if k.startswith("network."))

DEFAULT_RAW: dict[str, str] = {
    "network.lambda_t": "0.1",
    "network.lambda_r": "1e-4",
    "network.lambda_u": "0",
    "network.p_t": "1",
    "network.p_r": "1",
    "network.f_t": "1.0THz",
    "network.f_r": "2.1GHz",
    "network.k_a": "0.05",
    "network.alpha": "2.5",
    "network.w_t": "0.5GHz",
    "network.w_r": "40MHz",
    "network.r_th": "5Gbps",
    "network.n0_t": "auto",
    "network.n0_r": "0",
    "network.b_t": "1",
    "network.tx_gain_db": "25",
    "network.tx_gain_min_db": "-35",
    "network.tx_beamwidth_deg": "auto",
    "network.rx_gain_db": "25",
    "network.rx_gain_min_db": "-35",
    "network.rx_beamwidth_deg": "auto",
    "mc.trials": "100000",
    "mc.master_seed": "1",
    "mc.disc_radius": "100",
    "mc.gain_mode": "deterministic_f",
    "mc.association_rule": "brsp",
    "mc.rf_far_field": "truncate",
    "lt.truncation": "3",
    "lt.adaptive": "true",
    "lt.term_rel_tol": "1e-12",
    "lt.s_grid": "auto:20",
    "series.truncation": "20",
    "series.divergence_guard": "10",
    "gp.omega_max": "1e4",
    "quad.abs_tol": "1e-10",
    "quad.rel_tol": "1e-8",
    "quad.max_subdivisions": "2000",
    "outer_quad.abs_tol": "1e-7",
    "outer_quad.rel_tol": "1e-6",
    "outer_quad.max_subdivisions": "200",
    "coverage.mode": "thz_only",
    "coverage.thresholds": "18:32:15:db",
    "optimize.log10_b_min": "-8",
    "optimize.log10_b_max": "8",
    "optimize.grid_points": "17",
    "optimize.refine_tol": "1e-2",
    "optimize.tau": "1",
}


@dataclass(frozen=True)
class SweepSpec:
    """One numeric configuration key swept over explicit values."""

    key: str
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.key not in SWEEPABLE_KEYS:
            raise ConfigError(f"sweep.key: {self.key!r} is not a sweepable parameter")
        if len(self.values) < 1:
            raise ConfigError("sweep.grid: needs at least one value")


@dataclass(frozen=True)
class RunConfig:
    """A fully resolved run: domain parameters plus engine and command options."""

    params: NetworkParams
    mc: McConfig
    lt: LtOptions
    series: SeriesOptions
    gp: GilPelaezOptions
    quad: QuadratureSpec
    raw: tuple[tuple[str, str], ...]  # resolved key=value pairs, sorted

    def raw_dict(self) -> dict[str, str]:
        return dict(self.raw)

    def get(self, key: str) -> str | None:
        return self.raw_dict().get(key)


def read_config_text(text: str) -> dict[str, str]:
    """Parse the raw key = value lines, rejecting unknown or malformed keys."""
    values: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        base_key = key
        if key.startswith("curve."):
            parts = key.split(".", 2)
            if len(parts) != 3 or not parts[1]:
                raise ConfigError(f"line {lineno}: malformed curve override {key!r}")
            base_key = parts[2]
        if base_key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown configuration key {base_key!r}")
        values[key] = value
    return values


def parse_plain_float(text: str, key: str = "") -> float:
    try:
        return float(text.strip())
    except ValueError as exc:
        raise ConfigError(f"{key}: expected a plain number, got {text!r}") from exc


def _antenna(raw: dict[str, str], side: str) -> AntennaPattern:
    # the *_db keys hold dB numbers directly, so no unit suffix is accepted
    g_max_db = parse_plain_float(raw[f"network.{side}_gain_db"], f"network.{side}_gain_db")
    g_min_db = parse_plain_float(
        raw[f"network.{side}_gain_min_db"], f"network.{side}_gain_min_db"
    )
    beam_raw = raw[f"network.{side}_beamwidth_deg"].strip().lower()
    g_max = 10.0 ** (g_max_db / 10.0)
    g_min = 10.0 ** (g_min_db / 10.0)
    if beam_raw == "auto":
        beamwidth = 2.0 * math.pi / g_max
    else:
        beamwidth = math.radians(parse_plain_float(beam_raw, f"network.{side}_beamwidth_deg"))
    return AntennaPattern(g_max=g_max, g_min=g_min, beamwidth=beamwidth)


def build_config(raw_in: dict[str, str]) -> RunConfig:
    """Resolve a raw key map (defaults applied) into typed configuration."""
    raw = dict(DEFAULT_RAW)
    for key, value in raw_in.items():
        if key.startswith("curve."):
            continue
        if key not in KNOWN_KEYS:
            raise ConfigError(f"unknown configuration key {key!r}")
        raw[key] = value

    def q(key: str) -> float:
        return parse_quantity(raw[key], key)

    w_t = q("network.w_t")
    n0_t_raw = raw["network.n0_t"].strip().lower()
    n0_t = thermal_noise(w_t) if n0_t_raw == "auto" else parse_quantity(raw["network.n0_t"], "network.n0_t")
    params = NetworkParams(
        lambda_t=q("network.lambda_t"),
        lambda_r=q("network.lambda_r"),
        lambda_u=q("network.lambda_u"),
        p_t=q("network.p_t"),
        p_r=q("network.p_r"),
        f_t=q("network.f_t"),
        f_r=q("network.f_r"),
        k_a=q("network.k_a"),
        alpha=q("network.alpha"),
        w_t=w_t,
        w_r=q("network.w_r"),
        r_th=q("network.r_th"),
        n0_t=n0_t,
        n0_r=q("network.n0_r"),
        b_t=q("network.b_t"),
        tx_pattern=_antenna(raw, "tx"),
        rx_pattern=_antenna(raw, "rx"),
    )
    mode = raw["coverage.mode"]
    if mode not in COVERAGE_MODES:
        raise ConfigError(f"coverage.mode: must be one of {COVERAGE_MODES}, got {mode!r}")
    gain_mode = raw["mc.gain_mode"]
    if gain_mode not in GAIN_MODES:
        raise ConfigError(f"mc.gain_mode: must be one of {GAIN_MODES}, got {gain_mode!r}")
    rule = raw["mc.association_rule"]
    if rule not in ASSOCIATION_RULES:
        raise ConfigError(
            f"mc.association_rule: must be one of {ASSOCIATION_RULES}, got {rule!r}"
        )
    far = raw["mc.rf_far_field"]
    if far not in RF_FAR_FIELD_MODES:
        raise ConfigError(f"mc.rf_far_field: must be one of {RF_FAR_FIELD_MODES}, got {far!r}")
    mc = McConfig(
        trials=parse_int(raw["mc.trials"], "mc.trials"),
        master_seed=parse_int(raw["mc.master_seed"], "mc.master_seed"),
        disc_radius=q("mc.disc_radius"),
        interference_gain_mode=gain_mode,
        association_rule=rule,
        rf_far_field=far,
    )
    lt = LtOptions(
        truncation_L=parse_int(raw["lt.truncation"], "lt.truncation"),
        adaptive=parse_bool(raw["lt.adaptive"], "lt.adaptive"),
        term_rel_tol=q("lt.term_rel_tol"),
    )
    series = SeriesOptions(
        truncation_J=parse_int(raw["series.truncation"], "series.truncation"),
        divergence_guard=q("series.divergence_guard"),
    )
    quad = QuadratureSpec(
        abs_tol=q("quad.abs_tol"),
        rel_tol=q("quad.rel_tol"),
        max_subdivisions=parse_int(raw["quad.max_subdivisions"], "quad.max_subdivisions"),
    )
    outer = QuadratureSpec(
        abs_tol=q("outer_quad.abs_tol"),
        rel_tol=q("outer_quad.rel_tol"),
        max_subdivisions=parse_int(
            raw["outer_quad.max_subdivisions"], "outer_quad.max_subdivisions"
        ),
    )
    gp = GilPelaezOptions(
        omega_max=q("gp.omega_max"),
        quadrature=QuadratureSpec(1e-9, 1e-7, 64),
        outer_quadrature=outer,
    )
    return RunConfig(
        params=params,
        mc=mc,
        lt=lt,
        series=series,
        gp=gp,
        quad=quad,
        raw=tuple(sorted(raw.items())),
    )


def curve_overrides(raw_in: dict[str, str]) -> list[tuple[str, dict[str, str]]]:
    """Extract per-curve override maps, in first-appearance order."""
    curves: dict[str, dict[str, str]] = {}
    for key, value in raw_in.items():
        if not key.startswith("curve."):
            continue
        _, name, inner = key.split(".", 2)
        curves.setdefault(name, {})[inner] = value
    return list(curves.items())


def parse_sweep_expr(expr: str) -> SweepSpec:
    """CLI sweep expression: key=start:stop:count:scale or key=v1,v2,..."""
    if "=" not in expr:
        raise ConfigError(f"--sweep: expected key=grid, got {expr!r}")
    key, _, grid = expr.partition("=")
    key = key.strip()
    if key in ("lambda_t", "lambda_r", "k_a", "b_t", "alpha"):
        key = f"network.{key}"
    return SweepSpec(key=key, values=tuple(parse_grid(grid, key)))


def sweep_from_config(cfg_raw: dict[str, str]) -> SweepSpec | None:
    if "sweep.key" not in cfg_raw:
        return None
    if "sweep.grid" not in cfg_raw:
        raise ConfigError("sweep.key given without sweep.grid")
    key = cfg_raw["sweep.key"].strip()
    return SweepSpec(key=key, values=tuple(parse_grid(cfg_raw["sweep.grid"], "sweep.grid")))
