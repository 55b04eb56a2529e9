"""Domain types and deterministic channel functions for the two-tier network.

Holds every physical and deployment parameter of the coexisting RF/THz
downlink model plus the handful of deterministic maps (path gains, SINR
thresholds, sectored-antenna alignment distribution) shared by the analytic
engine and the Monte Carlo simulator.  All types are immutable after
construction and freely shareable across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError

SPEED_OF_LIGHT = 3.0e8  # m/s
BOLTZMANN = 1.380649e-23  # J/K
REFERENCE_TEMPERATURE_K = 290.0


def thermal_noise(bandwidth_hz: float, noise_figure_db: float = 0.0) -> float:
    """Thermal noise power k_B * 290 K * bandwidth, with an optional noise figure."""
    if bandwidth_hz <= 0:
        raise DomainError("bandwidth must be > 0")
    return BOLTZMANN * REFERENCE_TEMPERATURE_K * bandwidth_hz * 10.0 ** (noise_figure_db / 10.0)


@dataclass(frozen=True)
class AntennaPattern:
    """Two-level sectored antenna: main-lobe gain inside the beamwidth, side-lobe
    gain outside.  Gains are linear power ratios."""

    g_max: float
    g_min: float
    beamwidth: float  # radians

    def __post_init__(self) -> None:
        if not (self.g_max >= self.g_min > 0.0):
            raise DomainError("antenna gains must satisfy g_max >= g_min > 0")
        if not (0.0 < self.beamwidth < 2.0 * math.pi):
            raise DomainError("beamwidth must lie in (0, 2*pi)")

    @property
    def main_lobe_fraction(self) -> float:
        """Probability that a uniformly random boresight points through the main lobe."""
        return self.beamwidth / (2.0 * math.pi)

    @classmethod
    def from_db(
        cls,
        g_max_db: float,
        g_min_db: float | None = None,
        beamwidth: float | None = None,
    ) -> "AntennaPattern":
        """Build a pattern from dB gains.

        When no beamwidth is given the main lobe width defaults to
        2*pi / g_max, the energy-conserving width of an ideal sector antenna
        with negligible side lobes.  The side lobe defaults 60 dB below the
        main lobe.
        """
        g_max = 10.0 ** (g_max_db / 10.0)
        g_min = 10.0 ** ((g_max_db - 60.0 if g_min_db is None else g_min_db) / 10.0)
        if beamwidth is None:
            beamwidth = 2.0 * math.pi / g_max
        return cls(g_max=g_max, g_min=g_min, beamwidth=beamwidth)


@dataclass(frozen=True)
class GainDistribution:
    """Four-level product-gain distribution for a random interferer alignment:
    main*main, main*side, side*main, side*side."""

    gains: tuple[float, float, float, float]
    probabilities: tuple[float, float, float, float]

    def __post_init__(self) -> None:
        if any(g <= 0.0 for g in self.gains):
            raise DomainError("all gain levels must be positive")
        if any(p < 0.0 or p > 1.0 for p in self.probabilities):
            raise DomainError("alignment probabilities must lie in [0, 1]")
        if abs(sum(self.probabilities) - 1.0) > 1e-12:
            raise DomainError("alignment probabilities must sum to 1")

    @property
    def main_main_probability(self) -> float:
        return self.probabilities[0]


def gain_distribution(tx: AntennaPattern, rx: AntennaPattern) -> GainDistribution:
    """Joint gain/probability table for an interferer whose transmit and receive
    boresights are independently and uniformly oriented."""
    f_tx = tx.main_lobe_fraction
    f_rx = rx.main_lobe_fraction
    return GainDistribution(
        gains=(
            tx.g_max * rx.g_max,
            tx.g_max * rx.g_min,
            tx.g_min * rx.g_max,
            tx.g_min * rx.g_min,
        ),
        probabilities=(
            f_tx * f_rx,
            f_tx * (1.0 - f_rx),
            (1.0 - f_tx) * f_rx,
            (1.0 - f_tx) * (1.0 - f_rx),
        ),
    )


@dataclass(frozen=True)
class NetworkParams:
    """All physical and deployment parameters of the coexisting network.

    Intensities are BS per m^2, powers in W, frequencies and bandwidths in
    Hz, the molecular absorption coefficient k_a in 1/m, the target rate in
    bit/s.  ``lambda_u`` (user intensity) is accepted for deployment fidelity
    but no computation needs it: the typical-user analysis conditions on a
    user at the origin.
    """

    lambda_t: float  # THz BS intensity
    lambda_r: float  # RF BS intensity
    p_t: float  # THz transmit power
    p_r: float  # RF transmit power
    f_t: float  # THz carrier
    f_r: float  # RF carrier
    k_a: float  # molecular absorption coefficient
    alpha: float  # RF path-loss exponent
    w_t: float  # THz bandwidth
    w_r: float  # RF bandwidth
    r_th: float  # target rate
    n0_t: float  # THz-tier noise power
    n0_r: float  # RF-tier noise power (0 = interference-limited)
    b_t: float  # THz association bias
    tx_pattern: AntennaPattern
    rx_pattern: AntennaPattern
    lambda_u: float = 0.0  # inert, see docstring

    def __post_init__(self) -> None:
        positive = {
            "lambda_t": self.lambda_t,
            "lambda_r": self.lambda_r,
            "p_t": self.p_t,
            "p_r": self.p_r,
            "f_t": self.f_t,
            "f_r": self.f_r,
            "w_t": self.w_t,
            "w_r": self.w_r,
        }
        for name, value in positive.items():
            if name in ("lambda_t", "lambda_r"):
                # zero intensity is a legitimate degenerate deployment
                if not (math.isfinite(value) and value >= 0.0):
                    raise DomainError(f"{name} must be finite and >= 0, got {value!r}")
            elif not (math.isfinite(value) and value > 0.0):
                raise DomainError(f"{name} must be finite and > 0, got {value!r}")
        if not (math.isfinite(self.alpha) and self.alpha > 2.0):
            raise DomainError(f"alpha must be > 2, got {self.alpha!r}")
        if not (math.isfinite(self.k_a) and self.k_a >= 0.0):
            raise DomainError(f"k_a must be finite and >= 0, got {self.k_a!r}")
        if not (math.isfinite(self.b_t) and self.b_t >= 0.0):
            raise DomainError(f"b_t must be finite and >= 0, got {self.b_t!r}")
        if not (math.isfinite(self.r_th) and self.r_th >= 0.0):
            raise DomainError(f"r_th must be finite and >= 0, got {self.r_th!r}")
        for name, value in (("n0_t", self.n0_t), ("n0_r", self.n0_r)):
            if not (math.isfinite(value) and value >= 0.0):
                raise DomainError(f"{name} must be finite and >= 0, got {value!r}")
        if not (math.isfinite(self.lambda_u) and self.lambda_u >= 0.0):
            raise DomainError(f"lambda_u must be finite and >= 0, got {self.lambda_u!r}")

    def with_bias(self, b_t: float) -> "NetworkParams":
        return replace(self, b_t=b_t)


@dataclass(frozen=True)
class DerivedConstants:
    """Link constants and thresholds derived from NetworkParams."""

    gamma_t: float  # THz link constant incl. aligned antenna gains
    gamma_r: float  # RF link constant (omnidirectional)
    k_ratio: float  # P_R gamma_R / (B_T P_T gamma_T); inf when b_t == 0
    tau_t: float  # THz SINR threshold for the target rate
    tau_r: float  # RF SINR threshold for the target rate
    main_main_fraction: float  # alignment probability of a main*main interferer


def free_space_constant(frequency_hz: float) -> float:
    """(c / 4 pi f)^2, the isotropic free-space power scaling."""
    if frequency_hz <= 0:
        raise DomainError("frequency must be > 0")
    return (SPEED_OF_LIGHT / (4.0 * math.pi * frequency_hz)) ** 2


def derive_constants(params: NetworkParams) -> DerivedConstants:
    gamma_t = params.tx_pattern.g_max * params.rx_pattern.g_max * free_space_constant(params.f_t)
    gamma_r = free_space_constant(params.f_r)
    if params.b_t == 0.0:
        k_ratio = math.inf
    else:
        k_ratio = (params.p_r * gamma_r) / (params.b_t * params.p_t * gamma_t)
    dist = gain_distribution(params.tx_pattern, params.rx_pattern)
    return DerivedConstants(
        gamma_t=gamma_t,
        gamma_r=gamma_r,
        k_ratio=k_ratio,
        tau_t=sinr_threshold(params.r_th, params.w_t),
        tau_r=sinr_threshold(params.r_th, params.w_r),
        main_main_fraction=dist.main_main_probability,
    )


def thz_gain(r, params: NetworkParams):
    """THz channel power gain exp(-k_a r) / r^2 scaled by (c / 4 pi f_T)^2.

    Antenna gains are applied separately by the caller.  Accepts scalars or
    arrays; r must be strictly positive.
    """
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr <= 0.0) or not np.all(np.isfinite(r_arr)):
        raise DomainError("distance r must be finite and > 0")
    out = free_space_constant(params.f_t) * np.exp(-params.k_a * r_arr) / (r_arr * r_arr)
    return float(out) if np.ndim(r) == 0 else out


def rf_gain(rho, params: NetworkParams):
    """RF channel power gain gamma_R * rho^(-alpha) (deterministic part, no fading)."""
    rho_arr = np.asarray(rho, dtype=float)
    if np.any(rho_arr <= 0.0) or not np.all(np.isfinite(rho_arr)):
        raise DomainError("distance rho must be finite and > 0")
    out = free_space_constant(params.f_r) * rho_arr ** (-params.alpha)
    return float(out) if np.ndim(rho) == 0 else out


def sinr_threshold(rate: float, bandwidth: float) -> float:
    """SINR needed for a Shannon rate over a bandwidth: 2^(rate/bandwidth) - 1."""
    if rate < 0.0:
        raise DomainError("rate must be >= 0")
    if bandwidth <= 0.0:
        raise DomainError("bandwidth must be > 0")
    return 2.0 ** (rate / bandwidth) - 1.0


def default_params(**overrides) -> NetworkParams:
    """Reference parameter set used throughout the test and figure suites.

    Dense THz tier (0.1 BS/m^2) coexisting with sparse RF small cells
    (1e-4 BS/m^2), 1 W transmitters, 25 dB THz antenna gains, 1 THz carrier
    with k_a = 0.05 /m, 2.1 GHz RF carrier with alpha = 2.5, 0.5 GHz / 40 MHz
    bandwidths, and a 5 Gbps target rate.  The THz tier keeps thermal noise;
    the RF tier is treated as interference limited (n0_r = 0).
    """
    pattern = AntennaPattern.from_db(25.0)
    values = dict(
        lambda_t=0.1,
        lambda_r=1e-4,
        p_t=1.0,
        p_r=1.0,
        f_t=1.0e12,
        f_r=2.1e9,
        k_a=0.05,
        alpha=2.5,
        w_t=0.5e9,
        w_r=40e6,
        r_th=5e9,
        n0_t=thermal_noise(0.5e9),
        n0_r=0.0,
        b_t=1.0,
        tx_pattern=pattern,
        rx_pattern=pattern,
    )
    pattern_override = {}
    for key in ("tx_gain_db", "rx_gain_db"):
        if key in overrides:
            pattern_override[key] = overrides.pop(key)
    if pattern_override:
        tx_db = pattern_override.get("tx_gain_db", 25.0)
        rx_db = pattern_override.get("rx_gain_db", tx_db)
        values["tx_pattern"] = AntennaPattern.from_db(tx_db)
        values["rx_pattern"] = AntennaPattern.from_db(rx_db)
    if "w_t" in overrides and "n0_t" not in overrides:
        values["n0_t"] = thermal_noise(overrides["w_t"])
    values.update(overrides)
    return NetworkParams(**values)
