"""Exact Gaussian-rational scalars.

The exact regime of the toolkit works over Q(i): every scalar is a pair of
reduced rationals (re, im). fractions.Fraction already guarantees reduced
form and a positive denominator, so this module only adds the complex
structure, parsing, and formatting.
"""

from __future__ import annotations

import re as _re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

RationalLike = Union["ExactScalar", Fraction, int, str]

# "p/q", optionally followed by +/- "p/q i".  No decimals are ever emitted;
# the parser tolerates them because Fraction('2.5') is still exact.
_IMAG_ONLY = _re.compile(r"^\s*([+-]?)\s*((?:\d+(?:\.\d+)?|\.\d+)(?:\s*/\s*\d+)?)?\s*[iI]\s*$")
_SPLIT = _re.compile(
    r"^\s*(?P<re>[+-]?\s*(?:\d+(?:\.\d+)?|\.\d+)(?:\s*/\s*\d+)?)\s*"
    r"(?P<sign>[+-])\s*(?P<im>(?:\d+(?:\.\d+)?|\.\d+)(?:\s*/\s*\d+)?)?\s*[iI]\s*$"
)


def _fraction(text: str) -> Fraction:
    return Fraction(text.replace(" ", ""))


@dataclass(frozen=True)
class ExactScalar:
    """A Gaussian rational re + im*i with both parts reduced Fractions."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if not isinstance(self.re, Fraction):
            object.__setattr__(self, "re", Fraction(self.re))
        if not isinstance(self.im, Fraction):
            object.__setattr__(self, "im", Fraction(self.im))

    # -- constructors ------------------------------------------------------

    @staticmethod
    def parse(text: str) -> "ExactScalar":
        """Parse "p/q" or "re+im i" (spaces optional, i or I)."""
        m = _IMAG_ONLY.match(text)
        if m:
            mag = _fraction(m.group(2)) if m.group(2) else Fraction(1)
            return ExactScalar(Fraction(0), -mag if m.group(1) == "-" else mag)
        m = _SPLIT.match(text)
        if m:
            mag = _fraction(m.group("im")) if m.group("im") else Fraction(1)
            if m.group("sign") == "-":
                mag = -mag
            return ExactScalar(_fraction(m.group("re")), mag)
        try:
            return ExactScalar(_fraction(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an exact scalar: {text!r}") from exc

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def is_integer(self) -> bool:
        return not self.im and self.re.denominator == 1

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: RationalLike) -> "ExactScalar":
        o = as_exact(other)
        return ExactScalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: RationalLike) -> "ExactScalar":
        o = as_exact(other)
        return ExactScalar(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: RationalLike) -> "ExactScalar":
        return as_exact(other) - self

    def __mul__(self, other: RationalLike) -> "ExactScalar":
        o = as_exact(other)
        return ExactScalar(self.re * o.re - self.im * o.im,
                           self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other: RationalLike) -> "ExactScalar":
        o = as_exact(other)
        n = o.re * o.re + o.im * o.im
        if not n:
            raise ZeroDivisionError("division by zero ExactScalar")
        return ExactScalar((self.re * o.re + self.im * o.im) / n,
                           (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other: RationalLike) -> "ExactScalar":
        return as_exact(other) / self

    def __neg__(self) -> "ExactScalar":
        return ExactScalar(-self.re, -self.im)

    def __pow__(self, k: int) -> "ExactScalar":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "ExactScalar":
        return ExactScalar(self.re, -self.im)

    def abs_squared(self) -> Fraction:
        """|self|^2 as an exact Fraction (no square roots taken)."""
        return self.re * self.re + self.im * self.im

    # -- conversions -------------------------------------------------------

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{abs(self.im)}i"

    def __repr__(self) -> str:
        return f"ExactScalar({str(self)!r})"


ZERO = ExactScalar()
ONE = ExactScalar(Fraction(1))
I = ExactScalar(Fraction(0), Fraction(1))


def as_exact(x: RationalLike) -> ExactScalar:
    """Coerce to ExactScalar.  Floats are rejected: lossy intent must be explicit."""
    if isinstance(x, ExactScalar):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, Fraction)):
        return ExactScalar(Fraction(x))
    if isinstance(x, str):
        return ExactScalar.parse(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to ExactScalar")


def to_mpc(x, ctx):
    """Convert an exact or numeric scalar to ctx.mpc at the context's precision."""
    if isinstance(x, ExactScalar):
        re = ctx.mpf(x.re.numerator) / ctx.mpf(x.re.denominator)
        im = ctx.mpf(x.im.numerator) / ctx.mpf(x.im.denominator)
        return ctx.mpc(re, im)
    if isinstance(x, Fraction):
        return ctx.mpc(ctx.mpf(x.numerator) / ctx.mpf(x.denominator))
    return ctx.mpc(x)
