"""Numerical search for the association bias that maximizes total coverage.

Coverage as a function of the THz bias is scanned on a coarse logarithmic
grid and the best bracket refined by golden-section search.  Evaluators are
callables mapping a NetworkParams (with the candidate bias installed) to a
(coverage, noise_floor) pair, so the same search drives the analytic engine
or the Monte Carlo estimator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError
from .netmodel import NetworkParams

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

Evaluator = Callable[[NetworkParams], tuple[float, float]]


@dataclass(frozen=True)
class BiasSearchSpec:
    """Log-domain search window and refinement tolerance for the bias."""

    log10_b_min: float = -8.0
    log10_b_max: float = 8.0
    grid_points: int = 17
    refine_tol: float = 1e-2  # relative, on the bias value

    def __post_init__(self) -> None:
        if not self.log10_b_min < self.log10_b_max:
            raise DomainError("log10_b_min must be < log10_b_max")
        if self.grid_points < 3:
            raise DomainError("grid_points must be >= 3")
        if not self.refine_tol > 0.0:
            raise DomainError("refine_tol must be > 0")


@dataclass(frozen=True)
class BiasSearchResult:
    b_star: float
    coverage_at_b_star: float
    trace: tuple[tuple[float, float], ...]  # every (bias, coverage) evaluated
    flat_objective: bool
    multimodal: bool


def optimize_bias(
    params: NetworkParams,
    spec: BiasSearchSpec,
    evaluator: Evaluator,
) -> BiasSearchResult:
    """Find the bias maximizing the evaluator's coverage.

    Coarse log-grid scan, then golden-section refinement inside the best
    bracket.  A flat objective (spread below twice the evaluator noise floor)
    is flagged rather than refined; multiple strict local maxima on the grid
    are flagged as multimodal, and the best bracket is still refined.
    """
    trace: list[tuple[float, float]] = []
    noise_floor = 0.0

    def measure(log_b: float) -> float:
        nonlocal noise_floor
        bias = 10.0**log_b
        value, noise = evaluator(params.with_bias(bias))
        noise_floor = max(noise_floor, noise)
        trace.append((bias, value))
        return value

    grid = [
        spec.log10_b_min
        + (spec.log10_b_max - spec.log10_b_min) * i / (spec.grid_points - 1)
        for i in range(spec.grid_points)
    ]
    values = [measure(g) for g in grid]

    spread = max(values) - min(values)
    if spread < 2.0 * max(noise_floor, 1e-15):
        best = max(range(len(grid)), key=lambda i: values[i])
        return BiasSearchResult(
            b_star=10.0 ** grid[best],
            coverage_at_b_star=values[best],
            trace=tuple(trace),
            flat_objective=True,
            multimodal=False,
        )

    interior_maxima = sum(
        1
        for i in range(1, len(grid) - 1)
        if values[i] > values[i - 1] and values[i] > values[i + 1]
    )
    multimodal = interior_maxima > 1

    best = max(range(len(grid)), key=lambda i: values[i])
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, len(grid) - 1)]

    # golden-section refinement (log domain); tolerance in relative bias terms
    log_tol = math.log10(1.0 + spec.refine_tol)
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = measure(c), measure(d)
    while (b - a) > log_tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = measure(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = measure(d)

    best_bias, best_value = max(trace, key=lambda t: t[1])
    return BiasSearchResult(
        b_star=best_bias,
        coverage_at_b_star=best_value,
        trace=tuple(trace),
        flat_objective=False,
        multimodal=multimodal,
    )
