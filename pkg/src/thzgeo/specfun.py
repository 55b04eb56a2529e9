"""Special-function kernel for the analytic engine.

Supplies the four non-elementary functions the closed-form network results
need: the generalized exponential integral E_n, the upper incomplete gamma
at non-positive integer first argument, the parabolic cylinder function of
negative order, and the path-loss integral Z built on the Gauss
hypergeometric function.  Everything here is a pure function of its
arguments and safe to call from any number of threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, OverflowRangeError, PoleError, QuadratureError

EULER_GAMMA = 0.5772156649015328606

# D_{-nu}(z) grows like exp(z^2/4) for z -> -inf; beyond this the result
# cannot be represented in double precision.
PCF_MIN_ARGUMENT = -50.0

_EN_SERIES_MAX_TERMS = 120
_EN_CF_MAX_ITER = 400
_FPMIN = 1e-300


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerance budget for an adaptive quadrature."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 2000

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("quadrature tolerances must be strictly positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")


DEFAULT_QUADRATURE = QuadratureSpec()


def _as_positive_array(x, name: str) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise DomainError(f"{name} must be finite and > 0")
    return arr, scalar


def exp_integral_en(n: int, x):
    """Generalized exponential integral E_n(x) = ∫_1^∞ e^{-x t} t^{-n} dt.

    Uses the ascending series for x <= 1 and a modified-Lentz continued
    fraction for x > 1.  ``x`` may be a scalar or an ndarray; relative error
    is ~1e-14, comfortably below the 1e-10 contract.
    """
    if int(n) != n or n < 1:
        raise DomainError("order n must be an integer >= 1")
    n = int(n)
    if np.ndim(x) == 0:
        # plain-float path: the inversion engine calls this tens of
        # thousands of times per coverage point
        xs = float(x)
        if not math.isfinite(xs) or xs <= 0.0:
            raise DomainError("x must be finite and > 0")
        return _en_scalar(n, xs)
    arr, _scalar = _as_positive_array(x, "x")
    out = np.empty_like(arr)

    small = arr <= 1.0
    if np.any(small):
        out[small] = _en_series(n, arr[small])
    if np.any(~small):
        out[~small] = _en_contfrac(n, arr[~small])
    return out


def _en_scalar(n: int, x: float) -> float:
    if x <= 1.0:
        psi_n = -EULER_GAMMA + sum(1.0 / k for k in range(1, n))
        sign = -1.0 if n % 2 == 0 else 1.0
        lead = sign * math.exp((n - 1) * math.log(x) - math.lgamma(n)) * (psi_n - math.log(x))
        total = 0.0
        term = 1.0
        for m in range(_EN_SERIES_MAX_TERMS):
            if m != n - 1:
                contrib = term / (m - n + 1)
                total += contrib
                if m > n and abs(contrib) < 1e-17 * (abs(total) + 1e-300):
                    break
            term = term * (-x) / (m + 1)
        return lead - total
    b = x + n
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _EN_CF_MAX_ITER + 1):
        a = -i * (n - 1 + i)
        b += 2.0
        d = a * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + a / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            break
    return h * math.exp(-x)


def _en_series(n: int, x: np.ndarray) -> np.ndarray:
    # E_n(x) = [(-x)^{n-1}/(n-1)!] (psi(n) - ln x) - sum_{m != n-1} (-x)^m / ((m-n+1) m!)
    # the factorial is kept in log domain so large n cannot overflow
    psi_n = -EULER_GAMMA + sum(1.0 / k for k in range(1, n))
    sign = -1.0 if n % 2 == 0 else 1.0
    lead = sign * np.exp((n - 1) * np.log(x) - math.lgamma(n)) * (psi_n - np.log(x))
    total = np.zeros_like(x)
    term = np.ones_like(x)  # (-x)^m / m! at m = 0
    for m in range(_EN_SERIES_MAX_TERMS):
        if m != n - 1:
            contrib = term / (m - n + 1)
            total += contrib
            if np.all(np.abs(contrib) < 1e-17 * (np.abs(total) + 1e-300)) and m > n:
                break
        term = term * (-x) / (m + 1)
    return lead - total


def _en_contfrac(n: int, x: np.ndarray) -> np.ndarray:
    # Modified Lentz evaluation of the standard continued fraction
    # E_n(x) = e^{-x} / (x + n - 1/(x + n + 2 - 2(n+1)/(x + n + 4 - ...)))
    b = x + n
    c = np.full_like(x, 1.0 / _FPMIN)
    d = 1.0 / b
    h = d.copy()
    for i in range(1, _EN_CF_MAX_ITER + 1):
        a = -i * (n - 1 + i)
        b = b + 2.0
        d = a * d + b
        d = np.where(np.abs(d) < _FPMIN, _FPMIN, d)
        c = b + a / c
        c = np.where(np.abs(c) < _FPMIN, _FPMIN, c)
        d = 1.0 / d
        delta = c * d
        h *= delta
        if np.all(np.abs(delta - 1.0) < 1e-15):
            break
    return h * np.exp(-x)


def upper_inc_gamma_2m2l(l: int, x):
    """Upper incomplete gamma Γ(2-2l, x) for integer l >= 1 and x > 0.

    Computed through Γ(1-n, x) = x^{1-n} E_n(x) with n = 2l-1, which is
    stable for every argument this package needs.  Diverges as x -> 0, so
    x <= 0 is rejected.
    """
    if int(l) != l or l < 1:
        raise DomainError("l must be an integer >= 1")
    l = int(l)
    arr, scalar = _as_positive_array(x, "x")
    out = np.asarray(exp_integral_en(2 * l - 1, arr)) * arr ** (2 - 2 * l)
    if not np.all(np.isfinite(out)):
        raise OverflowRangeError(
            f"Γ({2 - 2 * l}, x) overflows double precision for x this small"
        )
    return float(out[0]) if scalar else out


def parabolic_cylinder_Dneg(
    nu: float, z: float, quad_spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> float:
    """Parabolic cylinder function D_{-nu}(z) for nu > 0 and real z.

    Evaluated from the integral representation
    D_{-nu}(z) = e^{-z^2/4} / Γ(nu) ∫_0^∞ t^{nu-1} e^{-t^2/2 - z t} dt
    with the integrand rescaled by its interior peak so the quadrature never
    overflows.  Safe for z >= PCF_MIN_ARGUMENT; more negative arguments would
    overflow double precision and raise OverflowRangeError instead of
    silently returning inf.
    """
    if not (math.isfinite(nu) and nu > 0.0):
        raise DomainError("order nu must be finite and > 0")
    if not math.isfinite(z):
        raise DomainError("argument z must be finite")
    if z < PCF_MIN_ARGUMENT:
        raise OverflowRangeError(
            f"D_(-{nu})({z}) exceeds double range; safe domain is z >= {PCF_MIN_ARGUMENT}"
        )

    # Interior maximum of (nu-1) ln t - t^2/2 - z t, when one exists.
    disc = z * z + 4.0 * (nu - 1.0)
    t_peak = (-z + math.sqrt(disc)) / 2.0 if disc > 0.0 else 0.0
    if t_peak > 0.0:
        log_scale = (nu - 1.0) * math.log(t_peak) - 0.5 * t_peak * t_peak - z * t_peak
    else:
        log_scale = 0.0

    def integrand(t: float) -> float:
        if t <= 0.0:
            return 0.0
        return math.exp((nu - 1.0) * math.log(t) - 0.5 * t * t - z * t - log_scale)

    split = max(1.0, 2.0 * t_peak)
    part1, err1 = quad(
        integrand,
        0.0,
        split,
        epsabs=quad_spec.abs_tol,
        epsrel=quad_spec.rel_tol,
        limit=quad_spec.max_subdivisions,
    )
    part2, err2 = quad(
        integrand,
        split,
        np.inf,
        epsabs=quad_spec.abs_tol,
        epsrel=quad_spec.rel_tol,
        limit=quad_spec.max_subdivisions,
    )
    total = part1 + part2
    if total <= 0.0 or not math.isfinite(total):
        raise QuadratureError(
            "parabolic cylinder quadrature collapsed", achieved_error=err1 + err2
        )
    value = math.exp(-0.25 * z * z + log_scale - math.lgamma(nu)) * total
    if not math.isfinite(value):
        raise OverflowRangeError(f"D_(-{nu})({z}) overflows double precision")
    return value


def hypergeom_Z(
    tau: float, alpha: float, quad_spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> float:
    """Interference path-loss integral Z(tau, alpha).

    Z(tau, alpha) = (2 tau / (alpha - 2)) 2F1(1, 1-2/alpha; 2-2/alpha; -tau),
    evaluated through the equivalent integral
    tau^{2/alpha} ∫_{tau^{-2/alpha}}^∞ du / (1 + u^{alpha/2}),
    which stays stable for arbitrarily large tau (SINR thresholds here reach
    2^125).  The hypergeometric series itself is only used by the test suite
    as a small-argument cross-check.
    """
    if not (math.isfinite(alpha) and alpha > 2.0):
        raise DomainError("alpha must be finite and > 2")
    if not math.isfinite(tau) or tau < 0.0:
        raise DomainError("tau must be finite and >= 0")
    if tau == 0.0:
        return 0.0

    half_alpha = alpha / 2.0
    lower = tau ** (-2.0 / alpha)
    prefactor = tau ** (2.0 / alpha)
    if not math.isfinite(prefactor):
        raise OverflowRangeError("tau^(2/alpha) overflows double precision")

    def integrand(u: float) -> float:
        return 1.0 / (1.0 + u**half_alpha)

    split = max(lower, 1.0)
    part1 = 0.0
    err1 = 0.0
    if split > lower:
        part1, err1 = quad(
            integrand,
            lower,
            split,
            epsabs=quad_spec.abs_tol,
            epsrel=quad_spec.rel_tol,
            limit=quad_spec.max_subdivisions,
        )
    part2, err2 = quad(
        integrand,
        split,
        np.inf,
        epsabs=quad_spec.abs_tol,
        epsrel=quad_spec.rel_tol,
        limit=quad_spec.max_subdivisions,
    )
    return prefactor * (part1 + part2)


def gamma_fn(x: float) -> float:
    """Euler gamma function with explicit pole detection."""
    if not math.isfinite(x):
        raise DomainError("gamma argument must be finite")
    if x <= 0.0 and x == math.floor(x):
        raise PoleError(f"gamma has a pole at {x}")
    try:
        return math.gamma(x)
    except OverflowError as exc:
        raise OverflowRangeError(f"gamma({x}) overflows double precision") from exc
