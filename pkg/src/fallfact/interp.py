"""Newton interpolation from samples at z = 0, 1, 2, ...

The coefficient extraction a_n = (delta^n f)(0) / n! is exact when the
samples are exact, and the finite binomial series it produces reproduces
every sample by construction.  High-order forward differences in floating
point lose roughly n bits to cancellation, so non-exact samples are lifted
to exact rationals (floats are rationals) for the triangle and only cast
back at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NonConvergenceError
from .exact import ExactScalar, as_exact
from .series import (BinomialSeries, DEFAULT_EPS, DEFAULT_N_MAX,
                     DEFAULT_PRECISION_BITS, EXACT, evaluate, evaluate_exact,
                     exact_series, make_context)


def _lift(value) -> tuple[ExactScalar, bool]:
    """Exact image of a sample and whether it was exact to begin with."""
    if isinstance(value, bool):
        raise TypeError("bool is not a sample value")
    if isinstance(value, (ExactScalar, int, Fraction, str)):
        return as_exact(value), True
    if isinstance(value, float):
        return ExactScalar(Fraction(value)), False
    if isinstance(value, complex):
        return ExactScalar(Fraction(value.real), Fraction(value.imag)), False
    c = complex(value)  # mpf / mpc and anything complex-like
    return ExactScalar(Fraction(c.real), Fraction(c.imag)), False


@dataclass(frozen=True)
class SampleTable:
    """Forward-difference triangle; row k holds (delta^k f)(0), ..., shrinking."""

    values: tuple
    difference_rows: tuple[tuple[ExactScalar, ...], ...]
    exact: bool

    @property
    def order(self) -> int:
        return len(self.values) - 1

    def leading_differences(self) -> tuple[ExactScalar, ...]:
        """(delta^n f)(0) for n = 0..N."""
        return tuple(row[0] for row in self.difference_rows)


def forward_differences(values: Sequence) -> SampleTable:
    if not values:
        raise ValueError("need at least one sample")
    lifted = [_lift(v) for v in values]
    exact = all(flag for _, flag in lifted)
    row = tuple(v for v, _ in lifted)
    rows = [row]
    while len(row) > 1:
        row = tuple(row[i + 1] - row[i] for i in range(len(row) - 1))
        rows.append(row)
    return SampleTable(tuple(values), tuple(rows), exact)


def newton_series(samples, origin: str = "interpolation",
                  precision_bits: int = DEFAULT_PRECISION_BITS) -> BinomialSeries:
    """Series with a_n = (delta^n f)(0) / n! from samples f(0..N).

    Exact samples give an exact-regime series; float or complex samples give
    an approx-regime series (the triangle is still computed exactly, so the
    only rounding is the final cast).
    """
    table = samples if isinstance(samples, SampleTable) else forward_differences(samples)
    coeffs = [d / math.factorial(n)
              for n, d in enumerate(table.leading_differences())]
    if table.exact:
        return exact_series(coeffs, origin)
    return BinomialSeries(tuple(complex(c) for c in coeffs), "approx", origin,
                          precision_bits)


@dataclass(frozen=True)
class InterpolationReport:
    points: tuple[int, ...]
    deviations: tuple[float, ...]
    max_deviation: float
    eps: float | None
    passed: bool | None


def reconstruct_check(series: BinomialSeries, values: Sequence,
                      eps: float | None = None,
                      n_max: int = DEFAULT_N_MAX,
                      precision_bits: int = DEFAULT_PRECISION_BITS) -> InterpolationReport:
    """Deviation |Y(k) - f(k)| at every original sample point.

    For an exact series over exact samples the deviations are identically
    zero; otherwise they bound the rounding of the final cast.  A point
    whose evaluation does not converge raises NonConvergenceError.
    """
    ctx = make_context(precision_bits)
    deviations = []
    for k, v in enumerate(values):
        target, target_exact = _lift(v)
        if series.regime == EXACT and target_exact:
            diff = evaluate_exact(series, k) - target
            deviations.append(math.sqrt(float(diff.abs_squared())))
            continue
        res = evaluate(series, k, DEFAULT_EPS, n_max, precision_bits=precision_bits)
        if not res.converged:
            raise NonConvergenceError(k)
        got = ctx.mpc(res.value)
        want = ctx.mpc(complex(target))
        deviations.append(float(abs(got - want)))
    worst = max(deviations, default=0.0)
    return InterpolationReport(tuple(range(len(values))), tuple(deviations),
                               worst, eps, None if eps is None else worst < eps)
