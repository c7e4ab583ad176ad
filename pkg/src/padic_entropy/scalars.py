"""Exact elements of Q_p backed by :class:`fractions.Fraction`.

A nonzero rational ``x`` is stored as ``unit * p**valuation`` with the
numerator and denominator of ``unit`` coprime to ``p``.  Zero carries the
valuation ``INFINITE`` (``math.inf``) so that min/plus valuation algebra
stays total.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .errors import NotPrime, PadicZeroDivisionError, PrimeMismatch, ScalarParseError

INFINITE = math.inf

Rational = Union[int, Fraction]


@lru_cache(maxsize=256)
def check_prime(p: int) -> int:
    """Return ``p`` if it is prime, else raise :class:`NotPrime` (trial division)."""
    if isinstance(p, bool) or not isinstance(p, int) or p < 2:
        raise NotPrime(f"{p!r} is not a prime")
    d = 2
    while d * d <= p:
        if p % d == 0:
            raise NotPrime(f"{p} is not a prime (divisible by {d})")
        d += 1
    return p


def int_valuation(n: int, p: int) -> float | int:
    if n == 0:
        return INFINITE
    v = 0
    # strip large blocks first; matters for the deep cotrajectories
    step, pk = 8, p**8
    while step:
        while n % pk == 0:
            n //= pk
            v += step
        step //= 2
        pk = p**step if step else 1
    return v


def valuation(x: Rational, p: int) -> float | int:
    """p-adic valuation of a rational; ``INFINITE`` for zero."""
    x = Fraction(x)
    if x.numerator == 0:
        return INFINITE
    return int_valuation(x.numerator, p) - int_valuation(x.denominator, p)


def split(x: Rational, p: int) -> tuple[float | int, Fraction]:
    """Return ``(v, u)`` with ``x = u * p**v`` and ``u`` a p-adic unit."""
    x = Fraction(x)
    if x.numerator == 0:
        return INFINITE, Fraction(1)
    vn = int_valuation(x.numerator, p)
    vd = int_valuation(x.denominator, p)
    unit = Fraction(x.numerator // p**vn, x.denominator // p**vd)
    return vn - vd, unit


def ppow(p: int, k: int) -> Fraction:
    return Fraction(p) ** k


_RATIONAL = r"[+-]?\d+(?:/\d+)?"
_SCALAR_RE = re.compile(
    rf"^(?P<sign>[+-]?)(?P<base>\d+)\^(?P<exp>[+-]?\d+)(?:\*(?P<rest>{_RATIONAL}))?$"
    rf"|^(?P<plain>{_RATIONAL})$"
)


def parse_rational(text: str) -> Fraction:
    """Parse ``"a/b"``, ``"a"`` or ``"q^k*a/b"`` (whitespace ignored)."""
    if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ScalarParseError(f"cannot parse scalar from {text!r}")
    s = "".join(text.split())
    m = _SCALAR_RE.match(s)
    if m is None:
        raise ScalarParseError(f"bad scalar literal {text!r}")
    try:
        if m.group("plain") is not None:
            return Fraction(m.group("plain"))
        value = Fraction(int(m.group("base"))) ** int(m.group("exp"))
        if m.group("rest") is not None:
            value *= Fraction(m.group("rest"))
        return -value if m.group("sign") == "-" else value
    except ZeroDivisionError as exc:
        raise ScalarParseError(f"zero denominator in {text!r}") from exc


def format_rational(x: Rational, p: int | None = None) -> str:
    """Render ``x`` in the scalar grammar; with ``p`` the p-power is split out."""
    x = Fraction(x)
    if p is None or x == 0:
        return str(x)
    v, u = split(x, p)
    if v == 0:
        return str(u)
    if u == 1:
        return f"{p}^{v}"
    return f"{p}^{v}*{u}"


@dataclass(frozen=True)
class PadicScalar:
    """An exact element of Q_p in canonical (valuation, unit) form."""

    prime: int
    valuation: float | int
    unit: Fraction

    def __post_init__(self):
        check_prime(self.prime)
        if self.valuation == INFINITE:
            if self.unit != 1:
                raise ValueError("zero must carry unit 1")
        elif self.unit.numerator % self.prime == 0 or self.unit.denominator % self.prime == 0:
            raise ValueError(f"{self.unit} is not a {self.prime}-adic unit")

    @classmethod
    def from_rational(cls, q: Rational, p: int) -> PadicScalar:
        check_prime(p)
        v, u = split(q, p)
        return cls(p, v, u)

    @classmethod
    def parse(cls, text: str, p: int) -> PadicScalar:
        return cls.from_rational(parse_rational(text), p)

    @classmethod
    def zero(cls, p: int) -> PadicScalar:
        return cls(check_prime(p), INFINITE, Fraction(1))

    def to_rational(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        return self.unit * ppow(self.prime, self.valuation)

    def is_zero(self) -> bool:
        return self.valuation == INFINITE

    def norm(self) -> Fraction:
        return padic_norm(self)

    def _coerce(self, other) -> PadicScalar:
        if isinstance(other, PadicScalar):
            if other.prime != self.prime:
                raise PrimeMismatch(f"primes {self.prime} and {other.prime} differ")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return PadicScalar.from_rational(other, self.prime)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PadicScalar.from_rational(self.to_rational() + other.to_rational(), self.prime)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        return PadicScalar(self.prime, self.valuation, -self.unit)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return PadicScalar.zero(self.prime)
        return PadicScalar(self.prime, self.valuation + other.valuation, self.unit * other.unit)

    __rmul__ = __mul__

    def inverse(self) -> PadicScalar:
        if self.is_zero():
            raise PadicZeroDivisionError("inverse of zero")
        return PadicScalar(self.prime, -self.valuation, 1 / self.unit)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __str__(self):
        return format_rational(self.to_rational(), self.prime)


def from_rational(q: Rational, p: int) -> PadicScalar:
    return PadicScalar.from_rational(q, p)


def padic_norm(x: PadicScalar) -> Fraction:
    """|x|_p = p^(-v(x)); zero maps to zero."""
    if x.is_zero():
        return Fraction(0)
    return ppow(x.prime, -x.valuation)
