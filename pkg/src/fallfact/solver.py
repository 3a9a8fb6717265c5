"""Linear difference equations with polynomial coefficients.

Equations come in two equivalent forms:

  delta form:   sum_j p_j(z) (delta^j y)(z) = 0
  shift form:   sum_j b_j(z) y(z+j) = 0

Substituting Y(z) = sum a_n z^(n_) turns the delta form into an exact linear
recurrence for the coefficients.  The derivation works in a small operator
calculus: the action of z-multiplication and of delta on the coefficient
sequence are both of the shape sum_s r_s(n) a_{n+s} (with a_k = 0 for k < 0),
and such operators compose exactly.  Collecting the image's coefficient of
z^(n_) yields polynomials q_i(n) plus a finite block of low-index equations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .analysis import (Classification, ENTIRE, GrowthEstimate, UNKNOWN,
                       chi_estimate, classify)
from .errors import (DeterminacyError, InputFormatError, PoleError,
                     SingularRecurrenceError)
from .exact import ExactScalar, ONE, ZERO, as_exact, to_mpc
from .polynomial import Polynomial, poly
from .series import (BinomialSeries, DEFAULT_EPS, DEFAULT_N_MAX,
                     DEFAULT_PRECISION_BITS, evaluate, exact_series,
                     make_context)

DELTA_FORM = "delta"
SHIFT_FORM = "shift"


@dataclass(frozen=True)
class LinearDifferenceEquation:
    """Coefficient polynomials indexed by operator power; trailing zeros trimmed."""

    form: str
    coeffs: tuple[Polynomial, ...]

    def __post_init__(self) -> None:
        if self.form not in (DELTA_FORM, SHIFT_FORM):
            raise InputFormatError(f"unknown equation form {self.form!r}")
        polys = [c if isinstance(c, Polynomial) else Polynomial(tuple(c))
                 for c in self.coeffs]
        while polys and polys[-1].is_zero():
            polys.pop()
        if not polys:
            raise InputFormatError("equation has no nonzero coefficient")
        object.__setattr__(self, "coeffs", tuple(polys))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, j: int) -> Polynomial:
        return self.coeffs[j] if 0 <= j <= self.order else Polynomial()


def to_shift_form(eq: LinearDifferenceEquation) -> LinearDifferenceEquation:
    """Rewrite via delta^j = sum_i C(j,i) (-1)^(j-i) E^i; exact and invertible."""
    if eq.form == SHIFT_FORM:
        return eq
    p = eq.order
    out = [Polynomial() for _ in range(p + 1)]
    for j, pj in enumerate(eq.coeffs):
        if pj.is_zero():
            continue
        for i in range(j + 1):
            sign = -1 if (j - i) % 2 else 1
            out[i] = out[i] + pj * as_exact(sign * math.comb(j, i))
    return LinearDifferenceEquation(SHIFT_FORM, tuple(out))


def to_delta_form(eq: LinearDifferenceEquation) -> LinearDifferenceEquation:
    """Rewrite via E^i = sum_j C(i,j) delta^j; exact inverse of to_shift_form."""
    if eq.form == DELTA_FORM:
        return eq
    p = eq.order
    out = [Polynomial() for _ in range(p + 1)]
    for i, bi in enumerate(eq.coeffs):
        if bi.is_zero():
            continue
        for j in range(i + 1):
            out[j] = out[j] + bi * as_exact(math.comb(i, j))
    return LinearDifferenceEquation(DELTA_FORM, tuple(out))


# ---------------------------------------------------------------------------
# coefficient-sequence operators
# ---------------------------------------------------------------------------

class _SeqOperator:
    """sum_s r_s(n) sigma^s acting on sequences, (sigma^s a)_n = a_{n+s}."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, Polynomial]):
        self.terms = {s: r for s, r in terms.items() if not r.is_zero()}

    @staticmethod
    def identity() -> "_SeqOperator":
        return _SeqOperator({0: poly(1)})

    @staticmethod
    def z_multiplication() -> "_SeqOperator":
        # (zY)_n = n a_n + a_{n-1}
        return _SeqOperator({0: poly(0, 1), -1: poly(1)})

    @staticmethod
    def delta_op() -> "_SeqOperator":
        # (delta Y)_n = (n+1) a_{n+1}
        return _SeqOperator({1: poly(1, 1)})

    def compose(self, other: "_SeqOperator") -> "_SeqOperator":
        """self after other: coefficient polynomials shift their argument."""
        out: dict[int, Polynomial] = {}
        for s, r in self.terms.items():
            for u, t in other.terms.items():
                contrib = r * t.shift_argument(s)
                key = s + u
                out[key] = out.get(key, Polynomial()) + contrib
        return _SeqOperator(out)

    def __add__(self, other: "_SeqOperator") -> "_SeqOperator":
        out = dict(self.terms)
        for s, r in other.terms.items():
            out[s] = out.get(s, Polynomial()) + r
        return _SeqOperator(out)

    def scaled(self, c: ExactScalar) -> "_SeqOperator":
        return _SeqOperator({s: r * c for s, r in self.terms.items()})


def _equation_operator(eq: LinearDifferenceEquation) -> _SeqOperator:
    eq = to_delta_form(eq)
    z_op = _SeqOperator.z_multiplication()
    d_op = _SeqOperator.delta_op()

    max_zdeg = max(len(p.coeffs) for p in eq.coeffs)
    z_pow = [_SeqOperator.identity()]
    for _ in range(max_zdeg - 1):
        z_pow.append(z_op.compose(z_pow[-1]))

    total = _SeqOperator({})
    d_power = _SeqOperator.identity()
    for j, pj in enumerate(eq.coeffs):
        if j:
            d_power = d_op.compose(d_power)
        if pj.is_zero():
            continue
        pz = _SeqOperator({})
        for k, ck in enumerate(pj.coeffs):
            if not ck.is_zero():
                pz = pz + z_pow[k].scaled(ck)
        total = total + pz.compose(d_power)
    return total


@dataclass(frozen=True)
class CoefficientRecurrence:
    """sum_i q_i(n) a_{n+i} = 0 for n >= n_start, plus low-index constraints.

    prefix_constraints are homogeneous rows over a_0 .. a_{n_start + d - 1}
    (d = order); together with user-supplied free values they pin down the
    initial block, after which the recurrence iterates forward.
    """

    q: tuple[Polynomial, ...]
    n_start: int
    prefix_constraints: tuple[tuple[ExactScalar, ...], ...]

    @property
    def order(self) -> int:
        return len(self.q) - 1

    @property
    def block_size(self) -> int:
        return self.n_start + self.order


def derive_recurrence(eq: LinearDifferenceEquation) -> CoefficientRecurrence:
    """Exact coefficient recurrence of the substituted binomial series.

    Negative shifts (from z-multiplication) produce dropped-term equations at
    small n; those become prefix constraints.  Positive minimal shift moves
    the generic range up instead (n_start > 0) and frees the low block.
    """
    op = _equation_operator(eq)
    if not op.terms:
        raise InputFormatError("equation operator collapsed to zero")
    s_min = min(op.terms)
    s_max = max(op.terms)
    d = s_max - s_min

    q = []
    for i in range(d + 1):
        r = op.terms.get(s_min + i, Polynomial())
        q.append(r.shift_argument(-s_min))  # substitute n -> m - s_min
    n_start = max(0, s_min)

    prefix: list[tuple[ExactScalar, ...]] = []
    for t in range(max(0, -s_min)):
        width = n_start + d
        row = [ZERO] * width
        for s, r in op.terms.items():
            col = t + s
            if col < 0:
                continue  # a_{<0} is identically zero
            row[col] = row[col] + r(t)
        if any(not c.is_zero() for c in row):
            prefix.append(tuple(row))
    return CoefficientRecurrence(tuple(q), n_start, tuple(prefix))


def _solve_initial_block(rec: CoefficientRecurrence,
                         free_values: Mapping[int, object]) -> list[ExactScalar]:
    b = rec.block_size
    rank_rows = [list(row) for row in rec.prefix_constraints]
    # rank of the homogeneous part decides how many values the caller must pin
    rank = _row_rank([row[:] for row in rank_rows], b)
    needed = b - rank
    if len(free_values) < needed:
        raise DeterminacyError(
            f"under-determined: {needed} free value(s) required, got {len(free_values)}")
    if len(free_values) > needed:
        raise DeterminacyError(
            f"over-determined: {needed} free value(s) required, got {len(free_values)}")

    rows: list[tuple[list[ExactScalar], ExactScalar]] = \
        [(row, ZERO) for row in rank_rows]
    for idx, val in sorted(free_values.items()):
        if not 0 <= idx < b:
            raise DeterminacyError(
                f"free value index a{idx} outside the initial block [0, {b})")
        unit = [ZERO] * b
        unit[idx] = ONE
        rows.append((unit, as_exact(val)))
    return _gauss_solve(rows, b)


def _row_rank(rows: list[list[ExactScalar]], width: int) -> int:
    rank = 0
    for col in range(width):
        pivot = next((i for i in range(rank, len(rows))
                      if not rows[i][col].is_zero()), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        lead = rows[rank][col]
        for i in range(len(rows)):
            if i != rank and not rows[i][col].is_zero():
                f = rows[i][col] / lead
                for c in range(col, width):
                    rows[i][c] = rows[i][c] - f * rows[rank][c]
        rank += 1
    return rank


def _gauss_solve(rows: list[tuple[list[ExactScalar], ExactScalar]],
                 width: int) -> list[ExactScalar]:
    mat = [row + [rhs] for row, rhs in rows]
    pivots: list[int] = []
    r = 0
    for col in range(width):
        pivot = next((i for i in range(r, len(mat)) if not mat[i][col].is_zero()), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        lead = mat[r][col]
        for i in range(len(mat)):
            if i != r and not mat[i][col].is_zero():
                f = mat[i][col] / lead
                for c in range(col, width + 1):
                    mat[i][c] = mat[i][c] - f * mat[r][c]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    for i in range(r, len(mat)):
        if not mat[i][width].is_zero():
            raise DeterminacyError("constraints and free values are inconsistent")
    if len(pivots) < width:
        missing = sorted(set(range(width)) - set(pivots))
        raise DeterminacyError(
            f"free values leave coordinates a{missing} undetermined")
    out = [ZERO] * width
    for row_idx, col in enumerate(pivots):
        out[col] = mat[row_idx][width] / mat[row_idx][col]
    return out


def solve_recurrence(rec: CoefficientRecurrence,
                     free_values: Mapping[int, object],
                     n_target: int) -> tuple[ExactScalar, ...]:
    """Coefficients a_0..a_N in exact arithmetic.

    Raises SingularRecurrenceError when the leading recurrence polynomial
    vanishes at a needed index (no resonance analysis is attempted) and
    DeterminacyError when free_values do not match the solution dimension.
    """
    if n_target < 0:
        raise ValueError("n_target must be nonnegative")
    block = _solve_initial_block(rec, free_values)
    a = list(block)
    d = rec.order
    lead = rec.q[d]
    m = rec.n_start
    while len(a) <= n_target:
        denom = lead(m)
        if denom.is_zero():
            raise SingularRecurrenceError(m)
        acc = ZERO
        for i in range(d):
            qi = rec.q[i](m)
            if not qi.is_zero():
                acc = acc + qi * a[m + i]
        a.append(-acc / denom)
        m += 1
    return tuple(a[:n_target + 1])


def formal_solve(eq: LinearDifferenceEquation,
                 free_values: Mapping[int, object],
                 n_target: int,
                 origin: str = "solver",
                 margin: float = 0.1,
                 window_fraction: float = 0.5) -> tuple[BinomialSeries, GrowthEstimate]:
    """derive -> solve -> wrap as an exact series with a growth verdict."""
    rec = derive_recurrence(eq)
    coeffs = solve_recurrence(rec, free_values, n_target)
    series = exact_series(coeffs, origin)
    if series.is_zero():
        est = GrowthEstimate(0.0, (0, n_target), Classification(ENTIRE, 0.0, False))
    elif len(coeffs) >= 16:
        chi = chi_estimate(coeffs, window_fraction)
        cls = classify(coeffs, margin, window_fraction)
        est = GrowthEstimate(chi.value, chi.window, cls)
    else:
        est = GrowthEstimate(math.nan, (0, n_target),
                             Classification(UNKNOWN, math.nan, True))
    return series, est


# ---------------------------------------------------------------------------
# Newton polygon
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NewtonPolygon:
    points: tuple[tuple[int, int], ...]
    hull: tuple[tuple[int, int], ...]
    slopes: tuple[Fraction, ...]


def newton_polygon(eq: LinearDifferenceEquation) -> NewtonPolygon:
    """Upper-left boundary of the quadrant union generated by
    (j, deg a_{p-j} - (p-j)); slopes are exact rationals, decreasing."""
    eq = to_delta_form(eq)
    p = eq.order
    pts: list[tuple[int, int]] = []
    for j in range(p + 1):
        c = eq.coefficient(p - j)
        if c.is_zero():
            continue
        pts.append((j, (len(c.coeffs) - 1) - (p - j)))

    hull: list[tuple[int, int]] = []
    for pt in pts:  # points arrive sorted by x
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (pt[1] - y2) - (y2 - y1) * (pt[0] - x2) >= 0:
                hull.pop()  # middle vertex is on or below the chord
            else:
                break
        hull.append(pt)

    # each generating point owns the quadrant to its lower right, so the
    # boundary turns horizontal at the first maximal-y vertex: keep only the
    # strictly ascending prefix
    boundary = [hull[0]]
    slopes: list[Fraction] = []
    for a, b in zip(hull, hull[1:]):
        s = Fraction(b[1] - a[1], b[0] - a[0])
        if s <= 0:
            break
        slopes.append(s)
        boundary.append(b)
    return NewtonPolygon(tuple(pts), tuple(boundary), tuple(slopes))


def candidate_orders(polygon: NewtonPolygon) -> tuple[Fraction, ...]:
    """Slopes in the open interval (0, 1): candidate orders of subnormal
    entire solutions.  Slopes >= 1 concern faster-growing solutions and are
    excluded; an empty result predicts no entire solution of order < 1."""
    return tuple(s for s in polygon.slopes if 0 < s < 1)


# ---------------------------------------------------------------------------
# continuation and verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContinuationResult:
    value: object
    converged: bool
    steps: int  # backward recursion depth
    direct_evaluations: int
    threshold: float

    def __complex__(self) -> complex:
        return complex(self.value)


def default_re_threshold(series: BinomialSeries, eps: float) -> float:
    """5 plus truncation-dependent slack: right of this line the stored tail
    dominates eps, so direct summation is trustworthy."""
    n = max(series.truncation_order, 1)
    return 5.0 + math.log(1.0 / eps) / math.log(n + 2)


def continuation_eval(eq: LinearDifferenceEquation, series: BinomialSeries, z,
                      eps: float = DEFAULT_EPS,
                      re_threshold: float | None = None,
                      n_max: int = DEFAULT_N_MAX,
                      precision_bits: int = DEFAULT_PRECISION_BITS,
                      max_steps: int = 10000,
                      check_classification: bool = True) -> ContinuationResult:
    """Evaluate left of the reliable half plane by unrolling the shift form:

        y(z) = -(1/b_0(z)) sum_{j>=1} b_j(z) y(z+j),

    stepping right until Re z crosses re_threshold, then summing directly.
    b_0 vanishing exactly at a needed point raises PoleError.
    """
    shift_eq = to_shift_form(eq)
    p = shift_eq.order
    if p < 1:
        raise InputFormatError("continuation needs an equation of order >= 1")
    if check_classification:
        cls = classify(series.coeffs)
        if cls.kind == UNKNOWN:
            raise InputFormatError(
                "series not classified entire or right-half-plane; "
                "continuation would propagate garbage")
    if re_threshold is None:
        re_threshold = default_re_threshold(series, eps)

    ctx = make_context(precision_bits)
    zz = to_mpc(z, ctx)
    re_z = float(zz.real)
    if re_z > re_threshold:
        res = evaluate(series, zz, eps, n_max, precision_bits=precision_bits)
        return ContinuationResult(res.value, res.converged, 0, 1, re_threshold)

    k_steps = int(math.floor(re_threshold - re_z)) + 1
    if k_steps > max_steps:
        raise InputFormatError(
            f"continuation would need {k_steps} steps (cap {max_steps})")

    values: dict[int, object] = {}
    converged = True
    for j in range(p):
        w = zz + (k_steps + j)
        res = evaluate(series, w, eps, n_max, precision_bits=precision_bits)
        converged = converged and res.converged
        values[k_steps + j] = res.value

    for k in range(k_steps - 1, -1, -1):
        w = zz + k
        b0 = shift_eq.coeffs[0].eval_numeric(w, ctx)
        if b0 == 0:
            raise PoleError(complex(w))
        acc = ctx.mpc(0)
        for j in range(1, p + 1):
            bj = shift_eq.coefficient(j)
            if bj.is_zero():
                continue
            acc += bj.eval_numeric(w, ctx) * values[k + j]
        values[k] = -acc / b0
    return ContinuationResult(values[0], converged, k_steps, p, re_threshold)


@dataclass(frozen=True)
class VerificationReport:
    points: tuple
    residuals: tuple[float, ...]
    max_residual: float
    eps: float | None
    passed: bool | None


def verify_solution(eq: LinearDifferenceEquation,
                    evaluator: Callable,
                    points: Sequence,
                    eps: float | None = None,
                    precision_bits: int = DEFAULT_PRECISION_BITS) -> VerificationReport:
    """Shift-form residual |sum_j b_j(z) y(z+j)| relative to the largest term.

    evaluator maps a point to a value (any complex-like); evaluation failures
    propagate to the caller.
    """
    shift_eq = to_shift_form(eq)
    ctx = make_context(precision_bits)
    residuals: list[float] = []
    for z in points:
        zz = to_mpc(z, ctx)
        terms = []
        for j in range(shift_eq.order + 1):
            bj = shift_eq.coefficient(j)
            if bj.is_zero():
                continue
            terms.append(bj.eval_numeric(zz, ctx) * ctx.mpc(evaluator(zz + j)))
        scale = max((abs(t) for t in terms), default=ctx.mpf(0))
        total = abs(sum(terms, ctx.mpc(0)))
        residuals.append(float(total / scale) if scale > 0 else 0.0)
    worst = max(residuals, default=0.0)
    return VerificationReport(tuple(points), tuple(residuals), worst, eps,
                              None if eps is None else worst < eps)
