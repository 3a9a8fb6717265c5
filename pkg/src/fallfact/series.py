"""Binomial series: finite coefficient lists against the falling-factorial basis.

A BinomialSeries stores a0..aN for Y(z) = sum a_n z^(n_).  The stored object
is always the exact finite sum it holds; operations transform that object
exactly.  When the input is a truncation of an infinite series, each
operation's docstring states through which index the output coefficients
remain faithful to the underlying series (delta: N-1, shift by m: N-m,
mul_by_z: N+1, and so on); beyond that the entries are still the exact
transform of the stored polynomial.

Two coefficient regimes: "exact" (Gaussian rationals) and "approx"
(configurable-precision binary floats via mpmath, default 128-bit
significand).  Evaluation runs in an isolated mpmath context per call, so it
is re-entrant with no shared mutable state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

from mpmath.ctx_mp import MPContext

from .basis import StirlingTable, default_table
from .errors import EvaluationOverflowError, RegimeMismatchError
from .exact import ExactScalar, ZERO, as_exact, to_mpc
from .polynomial import Polynomial

EXACT = "exact"
APPROX = "approx"

DEFAULT_PRECISION_BITS = 128
DEFAULT_EPS = 1e-12
DEFAULT_N_MAX = 10000
DEFAULT_WINDOW = 5  # consecutive small terms required before stopping

# |term| beyond this aborts evaluation; mpmath itself would happily continue.
OVERFLOW_EXPONENT = 100000


def make_context(precision_bits: int = DEFAULT_PRECISION_BITS) -> MPContext:
    """A fresh mpmath context; precision below 53 bits is rejected."""
    if precision_bits < 53:
        raise ValueError(f"precision_bits must be >= 53, got {precision_bits}")
    ctx = MPContext()
    ctx.prec = precision_bits
    return ctx


@dataclass(frozen=True)
class BinomialSeries:
    """Coefficients a0..aN of sum a_n z^(n_), plus regime and provenance."""

    coeffs: tuple = ()
    regime: str = EXACT
    origin: str = ""
    precision_bits: int = DEFAULT_PRECISION_BITS

    def __post_init__(self) -> None:
        if self.regime not in (EXACT, APPROX):
            raise ValueError(f"unknown regime {self.regime!r}")
        if self.regime == EXACT:
            object.__setattr__(self, "coeffs", tuple(as_exact(c) for c in self.coeffs))
        else:
            if self.precision_bits < 53:
                raise ValueError("precision_bits must be >= 53")
            object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @property
    def truncation_order(self) -> int:
        """Index of the last stored coefficient; -1 for the zero series."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        if self.regime == EXACT:
            return all(c.is_zero() for c in self.coeffs)
        return all(c == 0 for c in self.coeffs)

    def with_coeffs(self, coeffs: Iterable) -> "BinomialSeries":
        return BinomialSeries(tuple(coeffs), self.regime, self.origin, self.precision_bits)


def exact_series(coeffs: Iterable, origin: str = "") -> BinomialSeries:
    return BinomialSeries(tuple(coeffs), EXACT, origin)


def approx_series(coeffs: Iterable, precision_bits: int = DEFAULT_PRECISION_BITS,
                  origin: str = "") -> BinomialSeries:
    return BinomialSeries(tuple(coeffs), APPROX, origin, precision_bits)


def _zero_of(series: BinomialSeries):
    return ZERO if series.regime == EXACT else 0


# ---------------------------------------------------------------------------
# linear operators
# ---------------------------------------------------------------------------

def delta(series: BinomialSeries) -> BinomialSeries:
    """Forward difference: (delta Y)_n = (n+1) a_{n+1}.

    Faithful through index N-1 when the input truncates an infinite series.
    """
    a = series.coeffs
    return series.with_coeffs((n + 1) * a[n + 1] for n in range(len(a) - 1))


def mul_by_z(series: BinomialSeries) -> BinomialSeries:
    """z * Y: c_0 = 0, c_n = n a_n + a_{n-1}; the top entry is a_N alone.

    Output has one more coefficient than the input and is faithful through
    index N+1 for truncations (the missing a_{N+1} never enters c_{N+1}).
    """
    a = series.coeffs
    if not a:
        return series
    zero = _zero_of(series)
    out = [zero]
    for n in range(1, len(a)):
        out.append(n * a[n] + a[n - 1])
    out.append(a[-1])
    return series.with_coeffs(out)


def shift(series: BinomialSeries, m: int) -> BinomialSeries:
    """Y(z+m) = sum_j C(m,j) delta^j Y for integer m >= 0.

    Output keeps the input length (exact for the stored polynomial); entries
    are faithful through index N-m for truncations of infinite series.
    """
    if m < 0:
        raise ValueError("shift step must be a nonnegative integer")
    a = list(series.coeffs)
    if not a or m == 0:
        return series
    zero = _zero_of(series)
    out = [zero] * len(a)
    cur = a
    for j in range(m + 1):
        c = math.comb(m, j)
        for n, v in enumerate(cur):
            out[n] = out[n] + c * v
        cur = [(n + 1) * cur[n + 1] for n in range(len(cur) - 1)]
        if not cur:
            break
    return series.with_coeffs(out)


def linear_combine(pairs: Sequence[tuple]) -> BinomialSeries:
    """sum_k s_k * Y_k, zero-extended to the longest input.

    All series must share one regime; scalars are coerced to that regime.
    """
    if not pairs:
        raise ValueError("no series to combine")
    regimes = {s.regime for _, s in pairs}
    if len(regimes) != 1:
        raise RegimeMismatchError("cannot combine exact and approx series")
    template = pairs[0][1]
    exact = template.regime == EXACT
    zero = _zero_of(template)
    out = [zero] * max(len(s.coeffs) for _, s in pairs)
    for scalar, s in pairs:
        if exact:
            sc = as_exact(scalar)
            if sc.is_zero():
                continue
        else:
            sc = complex(scalar) if isinstance(scalar, ExactScalar) else scalar
        for n, v in enumerate(s.coeffs):
            out[n] = out[n] + sc * v
    return template.with_coeffs(out)


def mul_by_poly(series: BinomialSeries, p: Polynomial) -> BinomialSeries:
    """p(z) * Y via iterated mul_by_z, zero-extended to length N + deg p + 1."""
    if p.is_zero() or not series.coeffs:
        return series.with_coeffs(())
    exact = series.regime == EXACT
    zero = _zero_of(series)
    width = len(series.coeffs) + len(p.coeffs) - 1
    out = [zero] * width
    power = series
    for k, c in enumerate(p.coeffs):
        if k:
            power = mul_by_z(power)
        if c.is_zero():
            continue
        sc = c if exact else complex(c)
        for n, v in enumerate(power.coeffs):
            out[n] = out[n] + sc * v
    return series.with_coeffs(out)


def z_delta_k(series: BinomialSeries, k: int) -> BinomialSeries:
    """z * delta^k Y directly: c_n = n(n+1)...(n+k-1) ((n+k) a_{n+k} + a_{n+k-1}).

    Coincides coefficientwise with mul_by_z applied to k-fold delta.
    """
    if k < 1:
        raise ValueError("z_delta_k requires k >= 1")
    a = series.coeffs
    if len(a) <= k:
        return series.with_coeffs(())
    zero = _zero_of(series)
    out = [zero]
    for n in range(1, len(a) - k + 1):
        rising = 1
        for i in range(k):
            rising *= n + i
        head = a[n + k] if n + k < len(a) else zero
        out.append(rising * ((n + k) * head + a[n + k - 1]))
    return series.with_coeffs(out)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EvaluationResult:
    value: object  # ctx.mpc at the requested precision
    terms_used: int
    last_term_magnitude: float
    tail_bound: float
    converged: bool
    reason: str  # "window" | "integer" | "exhausted" | "n_max"

    def __complex__(self) -> complex:
        return complex(self.value)


def evaluate_exact(series: BinomialSeries, z) -> ExactScalar:
    """Exact finite sum of an exact-regime series at an exact point."""
    if series.regime != EXACT:
        raise RegimeMismatchError("evaluate_exact requires the exact regime")
    zz = as_exact(z)
    total = ZERO
    ff = ExactScalar(Fraction(1))
    for n, a in enumerate(series.coeffs):
        if n:
            ff = ff * (zz - (n - 1))
            if ff.is_zero():  # z hit a nonnegative integer; all later terms vanish
                break
        if not a.is_zero():
            total = total + a * ff
    return total


def _as_integer_point(z, ctx):
    """Return nonnegative int when z is exactly a nonnegative integer, else None."""
    if z.imag != 0:
        return None
    r = z.real
    if r < 0 or r != ctx.floor(r):
        return None
    return int(r)


def evaluate(series: BinomialSeries, z, eps: float = DEFAULT_EPS,
             n_max: int = DEFAULT_N_MAX, *,
             precision_bits: int | None = None,
             window: int = DEFAULT_WINDOW) -> EvaluationResult:
    """Partial sum of sum a_n z^(n_) with multiplicative falling-factorial updates.

    Stopping rules, in order of priority:
      * z a nonnegative integer m: terms beyond n = m vanish identically, so
        the sum terminates at min(m, N) and is converged unconditionally.
      * window rule: |term| < eps * max(1, |partial|) for `window` consecutive
        terms, allowed only once n >= ceil(|z|) + 5 (|z^(n_)| can grow before
        coefficient decay takes over).
      * exhaustion: all stored coefficients consumed; the value is then the
        exact finite sum of the stored object and is reported converged.
      * n_max reached first: returned with converged=False.

    The result value is an mpc from an isolated context at precision_bits
    (default: the series' own precision for approx series, else 128).
    """
    if precision_bits is None:
        precision_bits = series.precision_bits
    ctx = make_context(precision_bits)
    zz = to_mpc(z, ctx)

    if series.regime == EXACT and isinstance(z, (int, Fraction, ExactScalar)) \
            and not isinstance(z, bool):
        ze = as_exact(z)
        if ze.is_integer() and ze.re >= 0:
            # exact finite sum, cast once at the end
            m = int(ze.re)
            total = evaluate_exact(series, ze)
            stop = min(m, len(series.coeffs) - 1)
            last = _exact_term_magnitude(series, m, stop)
            return EvaluationResult(to_mpc(total, ctx), max(stop + 1, 0), last, 0.0,
                                    True, "integer")

    m = _as_integer_point(zz, ctx)

    limit = len(series.coeffs) - 1
    reason = "exhausted"
    if m is not None and m < limit:
        limit = m
        reason = "integer"
    capped = False
    if n_max < limit:
        limit = n_max
        capped = True

    eps_mp = ctx.mpf(eps)
    overflow = ctx.mpf(10) ** OVERFLOW_EXPONENT
    min_index = int(ctx.ceil(abs(zz))) + 5
    partial = ctx.mpc(0)
    ff = ctx.mpc(1)
    mags: list = []
    streak = 0
    terms_used = 0
    mag = ctx.mpf(0)
    stopped_by_window = False

    for n in range(limit + 1):
        a = series.coeffs[n]
        term = to_mpc(a, ctx) * ff
        partial += term
        mag = abs(term)
        mags.append(mag)
        terms_used = n + 1
        if mag > overflow:
            raise EvaluationOverflowError(n)
        if n >= min_index and mag < eps_mp * max(ctx.mpf(1), abs(partial)):
            streak += 1
            if streak >= window:
                stopped_by_window = True
                break
        else:
            streak = 0
        ff *= zz - n

    if stopped_by_window:
        converged, reason = True, "window"
        tail = _geometric_tail(mags, window)
    elif capped:
        # the cap cut the sum short of its natural end, integer point or not
        converged, reason, tail = False, "n_max", math.inf
    elif m is not None and reason == "integer":
        converged, tail = True, 0.0
    else:
        converged, tail = True, 0.0  # full stored sum, exact for the object

    last = float(mag) if terms_used else 0.0
    return EvaluationResult(partial, terms_used, last, tail, converged, reason)


def _geometric_tail(mags: Sequence, window: int) -> float:
    """Ratio-test style bound from the final window of term magnitudes."""
    tail_ratio = 0.0
    recent = mags[-window:]
    for prev, cur in zip(recent, recent[1:]):
        if prev == 0:
            continue
        tail_ratio = max(tail_ratio, float(cur / prev))
    if tail_ratio >= 1.0:
        return math.inf
    last = float(recent[-1]) if recent else 0.0
    return last * tail_ratio / (1.0 - tail_ratio) if tail_ratio else last


def _exact_term_magnitude(series: BinomialSeries, m: int, stop: int) -> float:
    if stop < 0:
        return 0.0
    ff = ExactScalar(Fraction(1))
    for n in range(1, stop + 1):
        ff = ff * (m - (n - 1))
    sq = (series.coeffs[stop] * ff).abs_squared()
    if not sq:
        return 0.0
    try:
        return math.sqrt(float(sq))
    except OverflowError:
        half_log = 0.5 * (math.log(sq.numerator) - math.log(sq.denominator))
        return math.exp(half_log) if half_log < 700 else math.inf


# ---------------------------------------------------------------------------
# Taylor conversions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TaylorCoefficients:
    coeffs: tuple
    chi_flagged: bool  # True when the source's growth estimate is >= 1 (conversion conditional)
    chi_value: float | None = None


def taylor_from_binomial(series: BinomialSeries, m_max: int,
                         k_cut: int | None = None,
                         table: StirlingTable | None = None) -> TaylorCoefficients:
    """b_n = sum_{k=n}^{k_cut} a_k * T1[k][n]: Taylor coefficients at 0.

    The inner sums are only absolutely convergent when the source decays
    fast enough (growth estimate below 1); otherwise the result is flagged
    but still returned, truncated at k_cut.
    """
    if m_max < 0:
        raise ValueError("m_max must be nonnegative")
    order = series.truncation_order
    if k_cut is None:
        k_cut = order
    if k_cut > order:
        raise ValueError(f"k_cut {k_cut} exceeds truncation order {order}")
    table = table or default_table()
    exact = series.regime == EXACT
    ctx = None if exact else make_context(series.precision_bits)

    out = []
    for n in range(m_max + 1):
        if exact:
            acc = ZERO
        else:
            acc = ctx.mpc(0)
        for k in range(n, k_cut + 1):
            eta = table.first_kind(k, n)
            if eta.is_zero():
                continue
            a = series.coeffs[k]
            if exact:
                acc = acc + a * eta
            else:
                acc = acc + to_mpc(a, ctx) * to_mpc(eta, ctx)
        out.append(acc)

    flagged = False
    chi_val: float | None = None
    if len(series.coeffs) >= 16:
        from .analysis import chi_estimate  # local import keeps analysis series-free
        est = chi_estimate(series.coeffs)
        chi_val = est.value
        flagged = est.undefined or est.value >= 1.0
    return TaylorCoefficients(tuple(out), flagged, chi_val)


def binomial_from_taylor(taylor_coeffs: Sequence, n_max: int | None = None,
                         k_cut: int | None = None,
                         table: StirlingTable | None = None,
                         precision_bits: int = DEFAULT_PRECISION_BITS,
                         origin: str = "") -> BinomialSeries:
    """a_n = sum_{k=n}^{k_cut} b_k * T2[k][n]: mirror of taylor_from_binomial."""
    top = len(taylor_coeffs) - 1
    if k_cut is None:
        k_cut = top
    if k_cut > top:
        raise ValueError(f"k_cut {k_cut} exceeds available Taylor order {top}")
    if n_max is None:
        n_max = k_cut
    table = table or default_table()
    exact = all(isinstance(b, (ExactScalar, int, Fraction, str)) for b in taylor_coeffs)
    ctx = None if exact else make_context(precision_bits)

    out = []
    for n in range(n_max + 1):
        acc = ZERO if exact else ctx.mpc(0)
        for k in range(n, k_cut + 1):
            eta = table.second_kind(k, n)
            if eta.is_zero():
                continue
            b = as_exact(taylor_coeffs[k]) if exact else to_mpc(taylor_coeffs[k], ctx)
            acc = acc + (b * eta if exact else b * to_mpc(eta, ctx))
        out.append(acc)
    regime = EXACT if exact else APPROX
    return BinomialSeries(tuple(out), regime, origin, precision_bits)
