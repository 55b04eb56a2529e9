"""Closed-form and quadrature engine for interference, association, and coverage.

Implements, for the coexisting RF/THz downlink model:

* the conditional Laplace transform of the THz aggregate interference, as an
  exponential of an incomplete-gamma series in the transform variable;
* the characteristic function of (desired signal - threshold * interference)
  and rate-coverage probabilities through Gil-Pelaez inversion;
* the THz association probability under biased received-power association,
  both as a direct expectation (the reference route) and as a parabolic
  cylinder function series with its large-density / low-absorption
  simplification;
* serving-distance densities for both tiers, the RF conditional and RF-only
  coverage through the hypergeometric path-loss integral, the coexisting
  total coverage, and the hybrid (dual-connection) coverage.

All functions are pure in their arguments; heavy intermediate quantities are
memoised on the immutable parameter objects.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import IntegrationWarning, quad
from scipy.special import lambertw

from .errors import (
    ConvergenceError,
    DegenerateDistributionError,
    DomainError,
    QuadratureError,
    SeriesDivergenceError,
)
from .netmodel import NetworkParams, derive_constants
from .specfun import (
    DEFAULT_QUADRATURE,
    QuadratureSpec,
    exp_integral_en,
    gamma_fn,
    hypergeom_Z,
    parabolic_cylinder_Dneg,
)

# The transform-variable power series of the interference LT exponent loses
# precision once |s| * (peak single-interferer power) exceeds this; the
# coverage engine never evaluates it beyond here.
SERIES_ARGUMENT_SAFE = 25.0
LT_MAX_TERMS = 120
LT_DIVERGENCE_GUARD = 10.0

# Conditional tail probabilities are declared 0/1 when certified to this level.
CERTAINTY_LOG = math.log(1e-13)

# Radial expectations are truncated where exp(-pi lambda r^2) < ~3e-17.
RADIAL_TAIL_EXPONENT = 38.0

# Raw-mass band inside which the approximate RF serving-distance density is
# trusted; outside it the exact association win factor replaces it (the
# approximation collapses for extreme bias, see coverage_rf_conditional).
RF_PDF_RAW_MASS_BAND = (0.5, 2.0)

_GL12 = leggauss(12)
_GL24 = leggauss(24)


@dataclass(frozen=True)
class LtOptions:
    """Truncation policy for the interference-LT exponent series."""

    truncation_L: int = 3
    adaptive: bool = True
    term_rel_tol: float = 1e-12

    def __post_init__(self) -> None:
        if self.truncation_L < 1:
            raise DomainError("truncation_L must be >= 1")
        if not self.term_rel_tol > 0.0:
            raise DomainError("term_rel_tol must be > 0")


@dataclass(frozen=True)
class GilPelaezOptions:
    """Controls for the inversion integral and the serving-distance expectation.

    ``omega_max`` caps the frequency integral in units of the conditional
    problem's characteristic frequency 1 / max(|signal - tau N0|, damping
    scale); ``quadrature`` budgets the frequency axis, ``outer_quadrature``
    the serving-distance expectation.
    """

    omega_max: float = 1e4
    quadrature: QuadratureSpec = field(default_factory=lambda: QuadratureSpec(1e-9, 1e-7, 64))
    outer_quadrature: QuadratureSpec = field(
        default_factory=lambda: QuadratureSpec(1e-7, 1e-6, 200)
    )

    def __post_init__(self) -> None:
        if not self.omega_max > 0.0:
            raise DomainError("omega_max must be > 0")


@dataclass(frozen=True)
class SeriesOptions:
    """Truncation and divergence policy for the association-probability series."""

    truncation_J: int = 20
    divergence_guard: float = 10.0

    def __post_init__(self) -> None:
        if self.truncation_J < 1:
            raise DomainError("truncation_J must be >= 1")
        if not self.divergence_guard > 1.0:
            raise DomainError("divergence_guard must exceed 1")


DEFAULT_LT = LtOptions()
DEFAULT_GP = GilPelaezOptions()
DEFAULT_SERIES = SeriesOptions()


@dataclass(frozen=True)
class CoverageDiagnostics:
    terms_used: int
    estimated_error: float
    preclamp: float
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class CoverageResult:
    """Probability in [0, 1] plus how it was obtained and how trustworthy it is."""

    probability: float
    method: str  # "series" | "quadrature" | "asymptotic" | "gil_pelaez"
    diagnostics: CoverageDiagnostics

    def __post_init__(self) -> None:
        if not (0.0 <= self.probability <= 1.0):
            raise DomainError("probability must be clamped to [0, 1]")


def _clamped(value: float, method: str, terms: int, err: float, notes=()) -> CoverageResult:
    return CoverageResult(
        probability=min(1.0, max(0.0, value)),
        method=method,
        diagnostics=CoverageDiagnostics(
            terms_used=terms, estimated_error=err, preclamp=value, notes=tuple(notes)
        ),
    )


# ---------------------------------------------------------------------------
# Interference Laplace transform (conditional on the serving distance)
# ---------------------------------------------------------------------------


def _interference_strength(params: NetworkParams) -> float:
    """gamma_T * F * P_T: the deterministic per-interferer power scale."""
    d = derive_constants(params)
    return d.gamma_t * d.main_main_fraction * params.p_t


def _lt_exponent(s: complex, r, params: NetworkParams, opts: LtOptions):
    """Exponent of the conditional LT at transform variable s, with term count.

    Vectorised over r.  Terms are built multiplicatively from their
    predecessor so neither the transform power nor the distance power ever
    materialises alone.  Raises ConvergenceError if term magnitudes grow for
    three consecutive orders beyond the divergence guard (the exponent series
    is entire, but finite precision limits usable |s|).
    """
    if params.k_a <= 0.0:
        raise DomainError(
            "the conditional interference LT needs k_a > 0; "
            "approximate the absorption-free limit with a small k_a"
        )
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r_arr <= 0.0):
        raise DomainError("serving distance r must be > 0")
    strength = _interference_strength(params)
    base = -s * strength
    en_prev = np.asarray(exp_integral_en(1, params.k_a * r_arr))
    term = 2.0 * math.pi * params.lambda_t * base * en_prev
    exponent = term.astype(complex)
    prev_mag = float(np.max(np.abs(term)))
    growth_streak = 0
    max_terms = LT_MAX_TERMS if opts.adaptive else opts.truncation_L
    terms = 1
    for l in range(2, max_terms + 1):
        en_cur = np.asarray(exp_integral_en(2 * l - 1, l * params.k_a * r_arr))
        ratio = np.where(en_prev > 0.0, en_cur / np.maximum(en_prev, 1e-320), 0.0)
        term = term * base * ratio / (l * r_arr * r_arr)
        exponent += term
        terms = l
        en_prev = en_cur
        mag = float(np.max(np.abs(term)))
        if not math.isfinite(mag):
            raise ConvergenceError(
                "interference LT series overflowed; |s| is outside the usable range"
            )
        if mag > LT_DIVERGENCE_GUARD * prev_mag:
            growth_streak += 1
            if growth_streak >= 3:
                raise ConvergenceError(
                    "interference LT series diverging for three consecutive orders"
                )
        else:
            growth_streak = 0
        prev_mag = mag
        if opts.adaptive and l >= opts.truncation_L:
            scale = float(np.max(np.abs(exponent)))
            if mag <= opts.term_rel_tol * max(scale, 1e-300):
                break
    return exponent, terms


def lt_thz_conditional(s, r, params: NetworkParams, opts: LtOptions = DEFAULT_LT):
    """Laplace transform of the THz aggregate interference given serving distance r.

    ``s`` may be real (classic LT) or purely imaginary (characteristic
    function); r may be a scalar or an array.  lt(0 | r) = 1 exactly.
    """
    s = complex(s)
    scalar = np.ndim(r) == 0
    if s == 0:
        r_arr = np.atleast_1d(np.asarray(r, dtype=float))
        if np.any(r_arr <= 0.0):
            raise DomainError("serving distance r must be > 0")
        if params.k_a <= 0.0:
            raise DomainError("the conditional interference LT needs k_a > 0")
        return 1.0 + 0.0j if scalar else np.ones(r_arr.shape, dtype=complex)
    exponent, _terms = _lt_exponent(s, r, params, opts)
    out = np.exp(exponent)
    return complex(out[0]) if scalar else out


def lt_thz_conditional_info(s, r, params: NetworkParams, opts: LtOptions = DEFAULT_LT):
    """As lt_thz_conditional, additionally returning the number of series terms used."""
    s = complex(s)
    if s == 0:
        return lt_thz_conditional(s, r, params, opts), 0
    exponent, terms = _lt_exponent(s, r, params, opts)
    out = np.exp(exponent)
    return (complex(out[0]) if np.ndim(r) == 0 else out), terms


def _lt_exponent_integral_real(s: float, r: float, params: NetworkParams) -> float:
    """LT exponent at real s >= 0 by quadrature of its defining integral.

    Usable at any s, unlike the power series; the tail beyond the numerical
    window is the first-order remainder s * strength * E_1(k_a U), accurate
    to ~5e-9 relative once the integrand argument has fallen below 1e-8.
    """
    strength = _interference_strength(params)
    s_a = s * strength
    ka = params.k_a

    def arg(u: float) -> float:
        return s_a * math.exp(-ka * u) / (u * u)

    upper = max(2.0 * r, 1.0)
    while arg(upper) > 1e-8 and upper < 1e9:
        upper *= 2.0
    knee = math.sqrt(s_a) if s_a > 0.0 else r
    pts = [knee] if r < knee < upper else None
    value, _err = quad(
        lambda u: -math.expm1(-arg(u)) * u,
        r,
        upper,
        epsabs=1e-13,
        epsrel=1e-10,
        limit=400,
        points=pts,
    )
    tail = s_a * float(exp_integral_en(1, ka * upper))
    return -2.0 * math.pi * params.lambda_t * (value + tail)


def lt_thz_average(
    s: float,
    params: NetworkParams,
    opts: LtOptions = DEFAULT_LT,
    quad_spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> tuple[float, int]:
    """Laplace transform of the THz aggregate interference averaged over the
    nearest-BS serving distance, at real s >= 0.

    Where the exponent power series is numerically safe it is used with the
    given truncation options; at very small serving distances (transform
    argument beyond the safe range, negligible probability mass) the exponent
    falls back to its defining integral.  Returns (value, fallback count).
    """
    if not (math.isfinite(s) and s >= 0.0):
        raise DomainError("s must be finite and >= 0")
    if params.lambda_t <= 0.0:
        raise DomainError("lt_thz_average needs lambda_t > 0")
    if s == 0.0:
        return 1.0, 0
    strength = _interference_strength(params)
    beta = math.pi * params.lambda_t
    r_safe_sq = s * strength / SERIES_ARGUMENT_SAFE
    fallbacks = 0

    def f(u: float) -> float:
        nonlocal fallbacks
        r = math.sqrt(u / beta)
        if r * r >= r_safe_sq:
            exponent, _t = _lt_exponent(complex(s), r, params, opts)
            value = float(np.exp(np.real(exponent[0])))
        else:
            fallbacks += 1
            value = math.exp(_lt_exponent_integral_real(s, r, params))
        return math.exp(-u) * value

    # integrate each side of the series/integral switch radius separately:
    # with fixed truncation the two exponents differ slightly at the seam
    u_switch = min(max(beta * r_safe_sq, 1e-12), RADIAL_TAIL_EXPONENT)
    value = 0.0
    for lo, hi in ((1e-12, u_switch), (u_switch, RADIAL_TAIL_EXPONENT)):
        if hi <= lo:
            continue
        part, _err = quad(
            f,
            lo,
            hi,
            epsabs=quad_spec.abs_tol,
            epsrel=quad_spec.rel_tol,
            limit=quad_spec.max_subdivisions,
        )
        value += part
    return min(1.0, max(0.0, value)), fallbacks


def mean_interference_thz(r, params: NetworkParams):
    """E[I | serving distance r] = 2 pi lambda_T gamma_T F P_T E_1(k_a r)."""
    if params.k_a <= 0.0:
        raise DomainError("mean interference needs k_a > 0")
    strength = _interference_strength(params)
    out = 2.0 * math.pi * params.lambda_t * strength * np.asarray(
        exp_integral_en(1, params.k_a * np.asarray(r, dtype=float))
    )
    return float(out) if np.ndim(r) == 0 else out


def desired_signal_power(r, params: NetworkParams):
    """Aligned-link received power P_T gamma_T e^{-k_a r} / r^2."""
    d = derive_constants(params)
    r_arr = np.asarray(r, dtype=float)
    out = params.p_t * d.gamma_t * np.exp(-params.k_a * r_arr) / (r_arr * r_arr)
    return float(out) if np.ndim(r) == 0 else out


# ---------------------------------------------------------------------------
# Serving-distance densities and association probability
# ---------------------------------------------------------------------------


def _thz_win_factor(r: np.ndarray, params: NetworkParams) -> np.ndarray:
    """Probability that the biased THz power from distance r beats the nearest
    RF base station: exp(-pi lambda_R (K r^2)^(2/alpha) e^(2 k_a r / alpha))."""
    k_ratio = derive_constants(params).k_ratio
    if params.lambda_r == 0.0:
        return np.ones_like(r)
    if math.isinf(k_ratio):
        return np.zeros_like(r)
    # assembled in log domain: at extreme radii the inner exponent overflows
    # a double while the win factor itself just underflows to 0
    log_expo = (
        math.log(math.pi * params.lambda_r)
        + (2.0 / params.alpha) * np.log(k_ratio * r * r)
        + 2.0 * params.k_a * r / params.alpha
    )
    return np.exp(-np.exp(np.minimum(log_expo, 709.0)))


@lru_cache(maxsize=128)
def _assoc_prob_cached(params: NetworkParams, quad_spec: QuadratureSpec) -> float:
    if params.lambda_t == 0.0:
        return 0.0
    beta = math.pi * params.lambda_t

    # expectation over the nearest-TBS distance, substituted to u = pi lambda_T r^2
    def f(u: float) -> float:
        r = math.sqrt(u / beta)
        return math.exp(-u) * float(_thz_win_factor(np.asarray([r]), params)[0])

    value, _err = quad(
        f,
        0.0,
        RADIAL_TAIL_EXPONENT,
        epsabs=quad_spec.abs_tol,
        epsrel=quad_spec.rel_tol,
        limit=quad_spec.max_subdivisions,
    )
    return min(1.0, max(0.0, value))


def assoc_prob_thz_quadrature(
    params: NetworkParams, quad_spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> float:
    """THz association probability by direct expectation over the nearest-TBS
    distance (the reference route for association probability)."""
    if params.lambda_r == 0.0 and params.lambda_t > 0.0:
        return 1.0
    if params.b_t == 0.0:
        return 0.0
    return _assoc_prob_cached(params, quad_spec)


def _series_term_log(params: NetworkParams, j: int, asymptotic: bool) -> float:
    """log magnitude of the j-th association-series term (sign is (-1)^j)."""
    d = derive_constants(params)
    alpha = params.alpha
    beta = math.pi * params.lambda_t
    nu_j = 4.0 * j / alpha + 2.0
    eta_j = -2.0 * j * params.k_a / alpha
    q = math.pi * params.lambda_r * d.k_ratio ** (2.0 / alpha)
    log_q_pow = j * math.log(q) if j > 0 else 0.0
    if asymptotic:
        # closed form of D_{-nu}(0): sqrt(pi) 2^{-nu/2} / Gamma((nu+1)/2)
        log_pcf = 0.5 * math.log(math.pi) - 0.5 * nu_j * math.log(2.0) - math.lgamma(
            (nu_j + 1.0) / 2.0
        )
    else:
        z_j = eta_j / math.sqrt(2.0 * beta)
        log_pcf = math.log(parabolic_cylinder_Dneg(nu_j, z_j))
    return (
        math.log(2.0 * math.pi * params.lambda_t)
        + log_q_pow
        + math.log(gamma_fn(nu_j))
        - 0.5 * nu_j * math.log(2.0 * beta)
        + eta_j * eta_j / (8.0 * beta)
        + log_pcf
        - math.lgamma(j + 1.0)
    )


def _assoc_prob_series_impl(
    params: NetworkParams, opts: SeriesOptions, asymptotic: bool
) -> float:
    if params.b_t == 0.0:
        return 0.0
    if params.lambda_t == 0.0:
        return 0.0
    if params.lambda_r == 0.0:
        # only the j = 0 term survives; still evaluate it to exercise the
        # constant bookkeeping rather than short-circuiting to 1
        return math.exp(_series_term_log(params, 0, asymptotic))
    total = 0.0
    prev_mag = None
    for j in range(opts.truncation_J + 1):
        log_mag = _series_term_log(params, j, asymptotic)
        mag = math.exp(log_mag) if log_mag < 700.0 else math.inf
        if prev_mag is not None and mag > opts.divergence_guard * prev_mag:
            raise SeriesDivergenceError(
                "association series terms growing (asymptotic regime exceeded); "
                "use assoc_prob_thz_quadrature instead"
            )
        total += (-1.0) ** j * mag
        prev_mag = mag
        if mag < 1e-16 * max(abs(total), 1e-300) and j > 0:
            break
    return total


def assoc_prob_thz_series(
    params: NetworkParams, opts: SeriesOptions = DEFAULT_SERIES
) -> float:
    """THz association probability as a parabolic-cylinder-function series.

    Alternating in j and asymptotic in character: reliable in the convergent
    regime (small pi lambda_R K^(2/alpha)) and guarded against term growth,
    in which case callers should fall back to the quadrature route.
    """
    return _assoc_prob_series_impl(params, opts, asymptotic=False)


def assoc_prob_thz_asymptotic(
    params: NetworkParams, opts: SeriesOptions = DEFAULT_SERIES
) -> float:
    """Association series with the PCF replaced by its zero-argument closed form.

    Intended for dense THz deployments or k_a -> 0, where the PCF argument
    vanishes."""
    return _assoc_prob_series_impl(params, opts, asymptotic=True)


def serving_distance_pdf_thz(x, params: NetworkParams):
    """Serving-distance density of THz-associated users (exact).

    (2 pi lambda_T x / P_assoc) * exp(-pi lambda_R (K x^2)^(2/alpha)
    e^(2 k_a x / alpha) - pi lambda_T x^2).
    """
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x_arr <= 0.0):
        raise DomainError("distance x must be > 0")
    p_assoc = assoc_prob_thz_quadrature(params)
    if p_assoc <= 0.0:
        raise DegenerateDistributionError("no user associates with the THz tier")
    out = (
        2.0 * math.pi * params.lambda_t * x_arr / p_assoc
        * _thz_win_factor(x_arr, params)
        * np.exp(-math.pi * params.lambda_t * x_arr * x_arr)
    )
    return float(out[0]) if np.ndim(x) == 0 else out


def mu_correction(k_a: float) -> float:
    """Correction exponent for approximating r^2 e^(k_a r) by r^(2 + mu)."""
    if k_a < 0.0:
        raise DomainError("k_a must be >= 0")
    if k_a > 0.1:
        return 2.0 + 10.0 * k_a / (1.0 + 2.0 * k_a)
    return 2.0 + 15.0 * k_a / (1.0 + 10.0 * k_a)


def _rf_win_factor_printed(x: np.ndarray, params: NetworkParams) -> np.ndarray:
    """Approximate probability that the nearest THz BS loses against RF power
    from distance x: exp(-pi lambda_T (K x^alpha / pi)^(1/(2+mu)))."""
    k_ratio = derive_constants(params).k_ratio
    if params.lambda_t == 0.0:
        return np.ones_like(x)
    if math.isinf(k_ratio):
        return np.ones_like(x)
    mu = mu_correction(params.k_a)
    expo = math.pi * params.lambda_t * (k_ratio * x**params.alpha / math.pi) ** (
        1.0 / (2.0 + mu)
    )
    return np.exp(-expo)


def _rf_win_factor_exact(x: np.ndarray, params: NetworkParams) -> np.ndarray:
    """Exact counterpart of _rf_win_factor_printed: exp(-pi lambda_T y(x)^2) with
    y the THz distance at which y^2 e^(k_a y) = x^alpha / K (Lambert W)."""
    k_ratio = derive_constants(params).k_ratio
    if params.lambda_t == 0.0 or math.isinf(k_ratio):
        return np.ones_like(x)
    c = x**params.alpha / k_ratio
    if params.k_a == 0.0:
        y_sq = c
    else:
        w = np.real(lambertw(params.k_a * np.sqrt(c) / 2.0))
        y = 2.0 * w / params.k_a
        y_sq = y * y
    return np.exp(-math.pi * params.lambda_t * y_sq)


@lru_cache(maxsize=128)
def _rf_pdf_parts(params: NetworkParams) -> tuple[float, float, float]:
    """(raw mass of the approximate RF density, P_assoc_RF, exact-factor mass)."""
    p_ar = 1.0 - assoc_prob_thz_quadrature(params)
    if p_ar < 1e-12:
        return 0.0, p_ar, 0.0
    beta_r = math.pi * params.lambda_r

    def mass(win_factor) -> float:
        def f(v: float) -> float:
            x = math.sqrt(v / beta_r)
            return math.exp(-v) * float(win_factor(np.asarray([x]), params)[0])

        # at extreme bias the integrand underflows everywhere and quadpack
        # warns about its extrapolation table; the value (0) is still right
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IntegrationWarning)
            value, _ = quad(
                f, 0.0, RADIAL_TAIL_EXPONENT, epsabs=1e-12, epsrel=1e-10, limit=400
            )
        return value

    printed = mass(_rf_win_factor_printed)
    exact = mass(_rf_win_factor_exact)
    return printed / p_ar, p_ar, exact / p_ar


def rf_pdf_raw_mass(params: NetworkParams) -> float:
    """Mass of the approximate RF serving-distance density before renormalization.

    Values near 1 certify the approximation; far from 1 they quantify its
    breakdown (the density is renormalized either way)."""
    raw, p_ar, _ = _rf_pdf_parts(params)
    if p_ar < 1e-12:
        raise DegenerateDistributionError("no user associates with the RF tier")
    return raw


def serving_distance_pdf_rf(x, params: NetworkParams):
    """Approximate serving-distance density of RF-associated users, renormalized.

    Uses the correction exponent mu; the pre-normalization mass is available
    from rf_pdf_raw_mass as the approximation-quality diagnostic.
    """
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x_arr <= 0.0):
        raise DomainError("distance x must be > 0")
    raw_mass, p_ar, _ = _rf_pdf_parts(params)
    if p_ar < 1e-12:
        raise DegenerateDistributionError("no user associates with the RF tier")
    out = (
        2.0 * math.pi * params.lambda_r * x_arr / (p_ar * raw_mass)
        * _rf_win_factor_printed(x_arr, params)
        * np.exp(-math.pi * params.lambda_r * x_arr * x_arr)
    )
    return float(out[0]) if np.ndim(x) == 0 else out


# ---------------------------------------------------------------------------
# Conditional and averaged coverage via Gil-Pelaez inversion
# ---------------------------------------------------------------------------


class _ConditionalLt:
    """Frozen per-distance view of the interference LT: a cached E_n ladder
    plus vectorised evaluation of the exponent over frequency arrays.

    All series terms are built multiplicatively from their predecessor so the
    huge individual factors (distance powers, factorials) never materialise.
    """

    def __init__(self, r: float, params: NetworkParams, tau: float, lt_opts: LtOptions):
        self.r = r
        self.tau = tau
        self.strength = _interference_strength(params)
        self.peak_power = self.strength * math.exp(-params.k_a * r) / (r * r)
        self.params = params
        self.lt_opts = lt_opts
        self._en: list[float] = []

    def _en_value(self, l: int) -> float:
        """E_{2l-1}(l k_a r), cached."""
        while len(self._en) < l:
            nxt = len(self._en) + 1
            self._en.append(
                float(exp_integral_en(2 * nxt - 1, nxt * self.params.k_a * self.r))
            )
        return self._en[l - 1]

    def damping_coefficient(self) -> float:
        """Second-order exponent coefficient 2 pi lambda_T E_3(2 k_a r) / (2 r^2);
        -Re(exponent) ~ this * (omega tau strength)^2 at small frequencies."""
        return (
            math.pi * self.params.lambda_t * self._en_value(2) / (self.r * self.r)
        )

    def omega_cap(self) -> float:
        """Largest usable frequency: series argument stays in the safe range."""
        return SERIES_ARGUMENT_SAFE / (self.tau * self.peak_power)

    def exponent(self, omega: np.ndarray) -> np.ndarray:
        """LT exponent at s = -i omega tau, vectorised over omega."""
        base = 1j * omega * self.tau * self.strength
        inv_r_sq = 1.0 / (self.r * self.r)
        term = 2.0 * math.pi * self.params.lambda_t * base * self._en_value(1)
        total = term.astype(complex)
        min_terms = self.lt_opts.truncation_L if not self.lt_opts.adaptive else 1
        max_terms = LT_MAX_TERMS if self.lt_opts.adaptive else self.lt_opts.truncation_L
        self.terms_used = 1
        for l in range(2, max_terms + 1):
            en_prev = self._en_value(l - 1)
            en_cur = self._en_value(l)
            if en_prev <= 0.0 or en_cur == 0.0:
                break
            term = term * base * (en_cur / en_prev) * (inv_r_sq / l)
            total += term
            self.terms_used = l
            mag = float(np.max(np.abs(term)))
            if not math.isfinite(mag):
                raise ConvergenceError(
                    "conditional LT series overflowed inside the inversion integral"
                )
            if self.lt_opts.adaptive and l >= max(min_terms, 2):
                scale = max(float(np.max(np.abs(total))), 1e-300)
                if mag <= self.lt_opts.term_rel_tol * scale:
                    break
        return total

    def log_mgf(self, theta: float) -> float:
        """Exponent of E[e^{theta I}] for real theta > 0 (positive-term series)."""
        t = theta * self.strength
        inv_r_sq = 1.0 / (self.r * self.r)
        term = 2.0 * math.pi * self.params.lambda_t * t * self._en_value(1)
        total = term
        for l in range(2, 400):
            en_prev = self._en_value(l - 1)
            en_cur = self._en_value(l)
            if en_prev <= 0.0 or en_cur == 0.0:
                break
            term *= t * inv_r_sq * en_cur / (l * en_prev)
            total += term
            if term < 1e-16 * max(total, 1e-300):
                break
            if not math.isfinite(total):
                return math.inf
        return total


def _chernoff_certifies_one(clt: _ConditionalLt, threshold: float) -> bool:
    """True when Pr[I >= threshold] is provably below the certainty level.

    Evaluates exp(psi(theta) - theta * threshold) on a fixed exponent ladder;
    any point below the certainty level suffices (Chernoff bound).
    """
    if threshold <= 0.0:
        return False
    for x in (0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 24.0):
        theta = x / clt.peak_power
        bound = clt.log_mgf(theta) - theta * threshold
        if bound < CERTAINTY_LOG:
            return True
    return False


def _panel_integral(g: Callable[[np.ndarray], np.ndarray], edges: np.ndarray, order12=True):
    """Composite Gauss-Legendre integral over consecutive panels, vectorised."""
    nodes, weights = _GL12 if order12 else _GL24
    mids = 0.5 * (edges[1:] + edges[:-1])
    halfs = 0.5 * (edges[1:] - edges[:-1])
    pts = (mids[:, None] + halfs[:, None] * nodes[None, :]).ravel()
    w = (halfs[:, None] * weights[None, :]).ravel()
    return float(np.dot(w, g(pts)))


def _conditional_coverage(
    r: float,
    params: NetworkParams,
    tau: float,
    lt_opts: LtOptions,
    gp_opts: GilPelaezOptions,
) -> tuple[float, float, int]:
    """Pr[S(r) > tau (N0 + I) | serving distance r] with error estimate and
    the number of LT series terms used."""
    margin = desired_signal_power(r, params) - tau * params.n0_t
    if margin <= 0.0:
        return 0.0, 0.0, 0
    if params.lambda_t == 0.0:
        return 1.0, 0.0, 0

    clt = _ConditionalLt(r, params, tau, lt_opts)
    if _chernoff_certifies_one(clt, margin / tau):
        return 1.0, 1e-13, 0

    mean_i = tau * float(mean_interference_thz(r, params))
    damp2 = clt.damping_coefficient() * (tau * clt.strength) ** 2  # -Re exp ~ damp2 w^2
    damp_scale = math.sqrt(damp2) if damp2 > 0.0 else 1e-300
    freq = margin + mean_i + damp_scale
    omega_ref = 1.0 / max(margin, damp_scale)
    omega_cap = min(clt.omega_cap(), gp_opts.omega_max * omega_ref)

    # damping cutoff: first frequency where |LT| falls below certainty
    probe_lo = min(max(0.3 / damp_scale, 1e-6 * omega_cap), 0.5 * omega_cap)
    probe = np.geomspace(probe_lo, omega_cap, 48)
    re_exp = np.real(clt.exponent(probe))
    below = np.nonzero(re_exp < CERTAINTY_LOG)[0]
    tail_mag = math.exp(max(float(re_exp[-1]), -745.0)) if len(below) == 0 else 1e-13
    omega_end = float(probe[below[0]]) if len(below) > 0 else omega_cap

    def integrand(omega: np.ndarray) -> np.ndarray:
        values = np.exp(clt.exponent(omega) - 1j * omega * margin)
        return np.imag(values) / omega

    # smooth region: fixed logarithmic ladder from omega_0 up to half a cycle
    omega_0 = 1e-8 * omega_ref
    omega_a = min(0.5 / freq, omega_end)
    spec = gp_opts.quadrature
    total = 0.0
    err = 0.0
    if omega_a > omega_0:
        edges = np.geomspace(omega_0, omega_a, 12)
        coarse = _panel_integral(integrand, edges, order12=True)
        fine = _panel_integral(integrand, edges, order12=False)
        total += fine
        err += abs(fine - coarse)
    # head correction [0, omega_0]: integrand has a finite limit there
    total += float(integrand(np.asarray([omega_0]))[0]) * omega_0

    if omega_end > omega_a:
        width = math.pi / freq
        n_panels = int(math.ceil((omega_end - omega_a) / width))
        if n_panels > 200_000:
            raise QuadratureError(
                f"Gil-Pelaez inversion would need {n_panels} oscillation panels",
                achieved_error=math.nan,
            )
        edges = np.linspace(omega_a, omega_end, n_panels + 1)
        for _ in range(12):
            coarse = _panel_integral(integrand, edges, order12=True)
            fine = _panel_integral(integrand, edges, order12=False)
            gap = abs(fine - coarse)
            if gap <= max(spec.abs_tol, spec.rel_tol * abs(fine)) or len(edges) > 400_000:
                break
            # refine by splitting every panel
            mids = 0.5 * (edges[1:] + edges[:-1])
            edges = np.sort(np.concatenate([edges, mids]))
        total += fine
        err += gap

    # truncated tail: the integrand alternates with half-period pi/margin and
    # envelope |LT|/omega, so the first omitted half-cycle bounds the tail
    err += tail_mag * min(1.0, math.pi / (margin * omega_end)) / math.pi

    p = 0.5 - total / math.pi
    return p, err, clt.terms_used


def _radial_expectation_of_coverage(
    params: NetworkParams,
    tau: float,
    weight_extra,
    normalizer: float,
    lt_opts: LtOptions,
    gp_opts: GilPelaezOptions,
) -> tuple[float, float, int]:
    """Integrate p(r) against a density 2 pi lambda_T r * extra(r) *
    exp(-pi lambda_T r^2) / normalizer, in the substituted variable
    u = pi lambda_T r^2."""
    beta = math.pi * params.lambda_t
    spec = gp_opts.outer_quadrature
    max_terms = 0
    err_samples: list[tuple[float, float]] = []

    def f(u: float) -> float:
        nonlocal max_terms
        r = math.sqrt(u / beta)
        p, e, t = _conditional_coverage(r, params, tau, lt_opts, gp_opts)
        max_terms = max(max_terms, t)
        extra = weight_extra(r)
        err_samples.append((u, math.exp(-u) * extra * e))
        return math.exp(-u) * extra * p

    value, outer_err = quad(
        f,
        1e-12,
        RADIAL_TAIL_EXPONENT,
        epsabs=spec.abs_tol,
        epsrel=spec.rel_tol,
        limit=spec.max_subdivisions,
    )
    # probability-weighted inner error, trapezoid over the sampled abscissae
    err_samples.sort()
    us = np.array([u for u, _ in err_samples])
    es = np.array([e for _, e in err_samples])
    inner_err = float(np.trapezoid(es, us)) if len(us) > 1 else float(es.sum())
    return value / normalizer, (outer_err + inner_err) / max(normalizer, 1e-300), max_terms


def cf_omega(
    omega: float,
    params: NetworkParams,
    serving_pdf: Callable[[np.ndarray], np.ndarray],
    gp_opts: GilPelaezOptions = DEFAULT_GP,
    lt_opts: LtOptions = DEFAULT_LT,
) -> complex:
    """Characteristic function of (desired signal - tau_T * interference) at
    frequency omega, averaged over the given serving-distance density.

    The density must carry essentially all its mass below
    sqrt(RADIAL_TAIL_EXPONENT / (pi lambda_T)); both serving densities in this
    package do.
    """
    if params.lambda_t <= 0.0:
        raise DomainError("cf_omega needs lambda_t > 0")
    if omega == 0.0:
        return 1.0 + 0.0j
    tau = derive_constants(params).tau_t
    beta = math.pi * params.lambda_t

    strength = _interference_strength(params)
    # radii whose transform argument exceeds the safe series range are dropped;
    # the integrand there has modulus <= pdf, so the truncation error is
    # bounded by their probability mass, pi lambda_T |omega| tau strength / 25
    r_unsafe_sq = abs(omega) * tau * strength / SERIES_ARGUMENT_SAFE

    def g_real(u: np.ndarray, part) -> np.ndarray:
        r = np.sqrt(u / beta)
        safe = r * r >= r_unsafe_sq
        values = np.zeros(r.shape, dtype=complex)
        if np.any(safe):
            rs = r[safe]
            exponent, _ = _lt_exponent(-1j * omega * tau, rs, params, lt_opts)
            values[safe] = (
                serving_pdf(rs)
                * np.exp(exponent - 1j * omega * desired_signal_power(rs, params))
                / (2.0 * beta * rs)
            )
        return part(values)

    edges = np.concatenate(
        [np.geomspace(1e-12, 0.05, 8), np.array([0.2, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 26.0, RADIAL_TAIL_EXPONENT])]
    )
    spec = gp_opts.outer_quadrature
    parts = []
    for part in (np.real, np.imag):
        cur = edges
        fine = _panel_integral(lambda u: g_real(u, part), cur, order12=False)
        for _ in range(8):
            coarse = fine
            mids = 0.5 * (cur[1:] + cur[:-1])
            cur = np.sort(np.concatenate([cur, mids]))
            fine = _panel_integral(lambda u: g_real(u, part), cur, order12=False)
            if abs(fine - coarse) <= max(spec.abs_tol, spec.rel_tol * abs(fine)):
                break
        parts.append(fine)
    return complex(parts[0], parts[1])


def coverage_thz_only(
    params: NetworkParams,
    tau_t: float | None = None,
    gp_opts: GilPelaezOptions = DEFAULT_GP,
    lt_opts: LtOptions = DEFAULT_LT,
) -> CoverageResult:
    """Rate coverage of a user served by its nearest THz BS, THz tier only."""
    if params.lambda_t <= 0.0:
        raise DomainError("coverage_thz_only needs lambda_t > 0")
    tau = derive_constants(params).tau_t if tau_t is None else float(tau_t)
    if tau < 0.0:
        raise DomainError("tau_t must be >= 0")
    if tau == 0.0:
        return _clamped(1.0, "gil_pelaez", 0, 0.0)
    value, err, terms = _radial_expectation_of_coverage(
        params, tau, lambda r: 1.0, 1.0, lt_opts, gp_opts
    )
    return _clamped(value, "gil_pelaez", terms, err)


def _coverage_thz_conditional_on_association(
    params: NetworkParams,
    tau: float,
    lt_opts: LtOptions,
    gp_opts: GilPelaezOptions,
) -> tuple[float, float, int]:
    """Coverage of THz-associated users: expectation of the conditional
    coverage against the THz serving-distance density."""
    p_assoc = assoc_prob_thz_quadrature(params)
    if p_assoc <= 0.0:
        raise DegenerateDistributionError("no user associates with the THz tier")

    def extra(r: float) -> float:
        return float(_thz_win_factor(np.asarray([r]), params)[0])

    return _radial_expectation_of_coverage(params, tau, extra, p_assoc, lt_opts, gp_opts)


def coverage_rf_only(
    params: NetworkParams,
    tau_r: float | None = None,
    quad_spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> CoverageResult:
    """Coverage of a user on its nearest RF BS in an RF-only network
    (interference-limited).

    Quadrature in the scale-free variable t = pi lambda_R rho^2, which is why
    the result cannot depend on lambda_R; the closed form 1/(1 + Z) serves as
    an internal cross-check recorded in the diagnostics.
    """
    tau = derive_constants(params).tau_r if tau_r is None else float(tau_r)
    if tau < 0.0:
        raise DomainError("tau_r must be >= 0")
    if tau == 0.0:
        return _clamped(1.0, "quadrature", 0, 0.0)
    z_val = hypergeom_Z(tau, params.alpha, quad_spec)

    value, err = quad(
        lambda t: math.exp(-t * (1.0 + z_val)),
        0.0,
        RADIAL_TAIL_EXPONENT,
        epsabs=quad_spec.abs_tol,
        epsrel=quad_spec.rel_tol,
        limit=quad_spec.max_subdivisions,
    )
    closed = 1.0 / (1.0 + z_val)
    return _clamped(
        value,
        "quadrature",
        0,
        err + abs(value - closed),
        notes=(f"closed-form gap {abs(value - closed):.2e}",),
    )


def coverage_rf_conditional(
    params: NetworkParams,
    tau_r: float | None = None,
    quad_spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> CoverageResult:
    """Coverage of RF-associated users (interference-limited): the RF
    interference LT at the serving-distance-scaled threshold, averaged over
    the RF serving-distance density.

    Uses the approximate density while its raw mass certifies it (band
    RF_PDF_RAW_MASS_BAND); beyond that band the approximation has collapsed
    (extreme bias), so the exact association win factor replaces it, which
    restores the correct nearest-RF limits.  The switch is recorded in the
    diagnostics notes.
    """
    tau = derive_constants(params).tau_r if tau_r is None else float(tau_r)
    if tau < 0.0:
        raise DomainError("tau_r must be >= 0")
    raw_mass, p_ar, exact_mass = _rf_pdf_parts(params)
    if p_ar < 1e-12:
        raise DegenerateDistributionError("no user associates with the RF tier")
    if tau == 0.0:
        return _clamped(1.0, "quadrature", 0, 0.0)
    z_val = hypergeom_Z(tau, params.alpha, quad_spec)
    notes = [f"rf pdf raw mass {raw_mass:.4g}"]
    lo, hi = RF_PDF_RAW_MASS_BAND
    if lo <= raw_mass <= hi:
        win_factor, mass = _rf_win_factor_printed, raw_mass
    else:
        win_factor, mass = _rf_win_factor_exact, exact_mass
        notes.append("raw mass outside sanity band; exact win factor substituted")
    if mass <= 1e-300:
        raise DegenerateDistributionError(
            "RF serving-distance density mass underflowed (extreme THz bias)"
        )

    beta_r = math.pi * params.lambda_r

    def f(v: float) -> float:
        x = math.sqrt(v / beta_r)
        return math.exp(-v * (1.0 + z_val)) * float(win_factor(np.asarray([x]), params)[0])

    value, err = quad(
        f,
        0.0,
        RADIAL_TAIL_EXPONENT,
        epsabs=quad_spec.abs_tol,
        epsrel=quad_spec.rel_tol,
        limit=quad_spec.max_subdivisions,
    )
    return _clamped(value / mass, "quadrature", 0, err / max(mass, 1e-300), notes)


def coverage_coexisting(
    params: NetworkParams,
    tau_t: float | None = None,
    tau_r: float | None = None,
    gp_opts: GilPelaezOptions = DEFAULT_GP,
    lt_opts: LtOptions = DEFAULT_LT,
    quad_spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> CoverageResult:
    """Total coverage under biased received-power association:
    P_assoc_THz * P_cov_THz + P_assoc_RF * P_cov_RF."""
    derived = derive_constants(params)
    tau_thz = derived.tau_t if tau_t is None else float(tau_t)
    tau_rf = derived.tau_r if tau_r is None else float(tau_r)
    p_at = assoc_prob_thz_quadrature(params, quad_spec)
    value = 0.0
    err = 0.0
    terms = 0
    notes: list[str] = [f"p_assoc_thz {p_at:.6g}"]
    # branches with < 1e-9 association weight cannot move the total by more
    # than 1e-9; skipping them avoids evaluating a degenerate conditional pdf
    if p_at > 1e-9 and params.lambda_t > 0.0:
        if tau_thz == 0.0:
            p_ct, e_ct, t_ct = 1.0, 0.0, 0
        else:
            p_ct, e_ct, t_ct = _coverage_thz_conditional_on_association(
                params, tau_thz, lt_opts, gp_opts
            )
        value += p_at * p_ct
        err += p_at * e_ct
        terms = max(terms, t_ct)
    else:
        err += p_at
    if 1.0 - p_at > 1e-9 and params.lambda_r > 0.0:
        try:
            rf = coverage_rf_conditional(params, tau_rf, quad_spec)
        except DegenerateDistributionError:
            # conditional RF pdf not evaluable at this bias extreme; the
            # branch weight bounds what it could have contributed
            err += 1.0 - p_at
            notes.append("rf branch skipped: conditional pdf degenerate")
        else:
            value += (1.0 - p_at) * rf.probability
            err += (1.0 - p_at) * rf.diagnostics.estimated_error
            notes.extend(rf.diagnostics.notes)
    else:
        err += 1.0 - p_at
    return _clamped(value, "quadrature", terms, err, notes)


def coverage_hybrid(
    params: NetworkParams,
    tau_t: float | None = None,
    tau_r: float | None = None,
    gp_opts: GilPelaezOptions = DEFAULT_GP,
    lt_opts: LtOptions = DEFAULT_LT,
    quad_spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> CoverageResult:
    """Coverage when the user holds both a THz and an RF connection and is in
    outage only if both fail: 1 - (1 - P_thz)(1 - P_rf)."""
    p_t = coverage_thz_only(params, tau_t, gp_opts, lt_opts) if params.lambda_t > 0.0 else None
    p_r = coverage_rf_only(params, tau_r, quad_spec) if params.lambda_r > 0.0 else None
    prob_t = 0.0 if p_t is None else p_t.probability
    prob_r = 0.0 if p_r is None else p_r.probability
    value = 1.0 - (1.0 - prob_t) * (1.0 - prob_r)
    err = sum(
        res.diagnostics.estimated_error for res in (p_t, p_r) if res is not None
    )
    terms = 0 if p_t is None else p_t.diagnostics.terms_used
    return _clamped(value, "quadrature", terms, err)
