"""Characteristic polynomials, Newton polygons and the Yuzvinski entropy formula.

Eigenvalue valuations are read off the Newton polygon of the characteristic
polynomial; no extension of Q_p is ever constructed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .entropy import EntropyValue
from .errors import DuplicatePrime, PrimeMismatch, ZeroPolynomial
from .matrix import PadicMatrix
from .scalars import INFINITE, PadicScalar, check_prime, valuation


# -- integer polynomials, constant term first --------------------------------

def _poly_trim(a: list[int]) -> list[int]:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _poly_trim(out)


def _poly_sub(a: list[int], b: list[int]) -> list[int]:
    n = max(len(a), len(b))
    return _poly_trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _poly_exact_div(a: list[int], b: list[int]) -> list[int]:
    """Divide by a polynomial with leading coefficient +-1; remainder must vanish."""
    a = list(a)
    lead = b[-1]
    if lead not in (1, -1):
        raise ArithmeticError("divisor must have unit leading coefficient")
    if len(a) < len(b):
        if any(a):
            raise ArithmeticError("inexact polynomial division")
        return [0]
    q = [0] * (len(a) - len(b) + 1)
    for k in range(len(q) - 1, -1, -1):
        c = a[k + len(b) - 1] * lead
        q[k] = c
        if c:
            for j, y in enumerate(b):
                a[k + j] -= c * y
    if any(a):
        raise ArithmeticError("inexact polynomial division")
    return _poly_trim(q)


def _bareiss_det(m: list[list[list[int]]]) -> list[int]:
    """Fraction-free determinant of a matrix over Z[x].

    Used on xI - N, whose leading principal minors are monic, so the pivot
    never vanishes and every division is by a monic polynomial.
    """
    n = len(m)
    m = [[list(e) for e in row] for row in m]
    prev = [1]
    for k in range(n - 1):
        piv = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = _poly_sub(_poly_mul(piv, m[i][j]), _poly_mul(m[i][k], m[k][j]))
                m[i][j] = _poly_exact_div(num, prev)
        prev = piv
    return m[n - 1][n - 1]


def char_poly_rational(m: PadicMatrix) -> list[Fraction]:
    """Coefficients of det(xI - m), constant term first, monic."""
    m.require_square()
    n = m.n
    d = lcm(*(x.denominator for row in m.entries for x in row))
    ints = [[int(x * d) for x in row] for row in m.entries]
    polys = [[[-ints[i][j], 1] if i == j else [-ints[i][j]] for j in range(n)] for i in range(n)]
    chi = _bareiss_det(polys)
    chi = chi + [0] * (n + 1 - len(chi))
    # det(xI - N/d) = d^-n * chi_N(d x)
    return [Fraction(c) * Fraction(d) ** (i - n) for i, c in enumerate(chi)]


def char_poly(m: PadicMatrix) -> list[PadicScalar]:
    return [PadicScalar.from_rational(c, m.prime) for c in char_poly_rational(m)]


# -- Newton polygons ---------------------------------------------------------

@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull data: (slope, horizontal length) pairs plus zero roots.

    A segment of slope ``s`` and length ``l`` accounts for ``l`` roots of
    valuation ``-s``.
    """

    segments: tuple[tuple[Fraction, int], ...]
    zero_roots: int = 0

    @property
    def degree(self) -> int:
        return self.zero_roots + sum(length for _, length in self.segments)

    def root_valuations(self) -> list:
        """Multiset of root valuations, ``INFINITE`` for roots equal to 0."""
        out = [INFINITE] * self.zero_roots
        for slope, length in self.segments:
            out.extend([-slope] * length)
        return out


def newton_polygon_from_valuations(vals: Sequence) -> NewtonPolygon:
    """Polygon of the points (i, vals[i]); ``INFINITE`` marks a zero coefficient."""
    if not vals or vals[-1] == INFINITE:
        if all(v == INFINITE for v in vals):
            raise ZeroPolynomial("zero polynomial has no Newton polygon")
        raise ZeroPolynomial("leading coefficient must be nonzero")
    zero_roots = 0
    while vals[zero_roots] == INFINITE:
        zero_roots += 1
    pts = [(i, Fraction(v)) for i, v in enumerate(vals) if v != INFINITE]
    hull: list[tuple[int, Fraction]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] unless it lies strictly below the chord hull[-2] -> pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    segments = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        segments.append(((y2 - y1) / (x2 - x1), x2 - x1))
    return NewtonPolygon(tuple(segments), zero_roots)


def newton_polygon(coeffs: Sequence[PadicScalar]) -> NewtonPolygon:
    """Newton polygon of sum coeffs[i] x^i (constant term first)."""
    if not coeffs:
        raise ZeroPolynomial("empty coefficient list")
    primes = {c.prime for c in coeffs}
    if len(primes) != 1:
        raise PrimeMismatch(f"coefficients over several primes: {sorted(primes)}")
    return newton_polygon_from_valuations([c.valuation for c in coeffs])


# -- entropy -----------------------------------------------------------------

def polygon_entropy(poly: NewtonPolygon, p: int) -> EntropyValue:
    """log p times the total positive slope mass, i.e. sum over |root|_p > 1."""
    mass = sum((slope * length for slope, length in poly.segments if slope > 0), Fraction(0))
    return EntropyValue({p: mass})


def yuzvinski_entropy(m: PadicMatrix) -> EntropyValue:
    """Topological entropy of x -> m x on Q_p^n from eigenvalue valuations."""
    m.require_square()
    chi = char_poly_rational(m)
    poly = newton_polygon_from_valuations([valuation(c, m.prime) for c in chi])
    return polygon_entropy(poly, m.prime)


def entropy_sum_over_primes(parts: Iterable[tuple[int, PadicMatrix]]) -> EntropyValue:
    """Entropy of a product of p-components, one matrix per distinct prime."""
    total = EntropyValue.zero()
    seen = set()
    for p, m in parts:
        check_prime(p)
        if p in seen:
            raise DuplicatePrime(f"prime {p} appears twice")
        seen.add(p)
        if m.prime != p:
            raise PrimeMismatch(f"matrix over {m.prime} listed under prime {p}")
        total = total + yuzvinski_entropy(m)
    return total
