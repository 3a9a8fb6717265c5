"""Falling factorials and conversion between the monomial and binomial bases.

z^(n_) denotes z(z-1)...(z-n+1).  Two triangular tables drive everything:

  first kind:   z^(n_) = sum_j  T1[n][j] * z^j      (signed entries)
  second kind:  z^n    = sum_k  T2[n][k] * z^(k_)

Both satisfy one-step Pascal-type recurrences, are exact integers, and are
mutual inverses as lower-triangular matrices.  Rows are cached and extended
on demand; extension is serialized by a lock and rows are immutable, so
concurrent readers are safe.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import ExactScalar, ONE, ZERO, as_exact
from .polynomial import Polynomial


class StirlingTable:
    """Cached rows of both conversion tables, grown on demand."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._first: list[tuple[ExactScalar, ...]] = [(ONE,)]
        self._second: list[tuple[ExactScalar, ...]] = [(ONE,)]

    def ensure(self, n: int) -> None:
        if n < 0:
            raise ValueError("row index must be nonnegative")
        if n < len(self._first):
            return
        with self._lock:
            while len(self._first) <= n:
                m = len(self._first) - 1  # extend row m -> m+1
                prev1 = self._first[m]
                row1 = [ZERO] * (m + 2)
                prev2 = self._second[m]
                row2 = [ZERO] * (m + 2)
                for j in range(1, m + 2):
                    above = prev1[j] if j <= m else ZERO
                    left = prev1[j - 1]
                    row1[j] = left - m * above
                for k in range(1, m + 2):
                    above = prev2[k] if k <= m else ZERO
                    left = prev2[k - 1]
                    row2[k] = left + k * above
                self._first.append(tuple(row1))
                self._second.append(tuple(row2))

    def first_kind_row(self, n: int) -> tuple[ExactScalar, ...]:
        self.ensure(n)
        return self._first[n]

    def second_kind_row(self, n: int) -> tuple[ExactScalar, ...]:
        self.ensure(n)
        return self._second[n]

    def first_kind(self, n: int, j: int) -> ExactScalar:
        row = self.first_kind_row(n)
        return row[j] if 0 <= j <= n else ZERO

    def second_kind(self, n: int, k: int) -> ExactScalar:
        row = self.second_kind_row(n)
        return row[k] if 0 <= k <= n else ZERO


_DEFAULT_TABLE = StirlingTable()


def default_table() -> StirlingTable:
    return _DEFAULT_TABLE


def stirling_first_row(n: int) -> tuple[ExactScalar, ...]:
    return _DEFAULT_TABLE.first_kind_row(n)


def stirling_second_row(n: int) -> tuple[ExactScalar, ...]:
    return _DEFAULT_TABLE.second_kind_row(n)


def falling_factorial(n: int) -> Polynomial:
    """The monomial expansion of z^(n_); n = 0 gives the constant 1."""
    return Polynomial(stirling_first_row(n))


def binomial_to_poly(coeffs: Sequence, table: StirlingTable | None = None) -> Polynomial:
    """Expand sum a_n z^(n_) into the monomial basis, exactly."""
    table = table or _DEFAULT_TABLE
    out: list[ExactScalar] = [ZERO] * len(coeffs)
    for n, a in enumerate(coeffs):
        an = as_exact(a)
        if an.is_zero():
            continue
        row = table.first_kind_row(n)
        for j in range(n + 1):
            if not row[j].is_zero():
                out[j] = out[j] + an * row[j]
    return Polynomial(tuple(out))


def poly_to_binomial(p: Polynomial, table: StirlingTable | None = None) -> tuple[ExactScalar, ...]:
    """Rewrite a polynomial as sum c_n z^(n_); output length = deg + 1."""
    table = table or _DEFAULT_TABLE
    if p.is_zero():
        return ()
    d = len(p.coeffs) - 1
    out = [ZERO] * (d + 1)
    for k, b in enumerate(p.coeffs):
        if b.is_zero():
            continue
        row = table.second_kind_row(k)
        for n in range(k + 1):
            if not row[n].is_zero():
                out[n] = out[n] + b * row[n]
    return tuple(out)


@dataclass(frozen=True)
class BoundsReport:
    n_max: int
    all_hold: bool
    failures: tuple[tuple[str, int, int], ...]  # (kind, n, j)


def verify_stirling_bounds(n_max: int, table: StirlingTable | None = None) -> BoundsReport:
    """Check |entry(j,n)| <= ((n-1)!/(j-1)!)^2 / (n-j)! for 1 <= j <= n <= n_max.

    The bound applies to both kinds; the j = 0 column is excluded (those
    entries vanish for n >= 1).  Comparison is exact rational arithmetic.
    """
    table = table or _DEFAULT_TABLE
    failures: list[tuple[str, int, int]] = []
    for n in range(1, n_max + 1):
        row1 = table.first_kind_row(n)
        row2 = table.second_kind_row(n)
        for j in range(1, n + 1):
            bound = Fraction(math.factorial(n - 1), math.factorial(j - 1)) ** 2 \
                / math.factorial(n - j)
            for kind, row in (("first", row1), ("second", row2)):
                entry = row[j]
                if abs(entry.re) > bound:  # entries are real integers
                    failures.append((kind, n, j))
    return BoundsReport(n_max=n_max, all_hold=not failures, failures=tuple(failures))
