"""Exact matrices over Q_p (entries are rationals tagged with a prime)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, NonSquare, PadicZeroDivisionError, PrimeMismatch
from .scalars import PadicScalar, check_prime, format_rational, parse_rational, valuation

Grid = list[list[Fraction]]


def mat_mul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Grid:
    cols = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols] for row in a]


def transpose(a: Sequence[Sequence[Fraction]]) -> Grid:
    return [list(r) for r in zip(*a)]


def identity(n: int) -> Grid:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def inverse(a: Sequence[Sequence[Fraction]]) -> Grid:
    """Gauss-Jordan inverse over Q."""
    n = len(a)
    work = [list(map(Fraction, row)) + identity(n)[i] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r][col] != 0), None)
        if piv is None:
            raise PadicZeroDivisionError("matrix is singular")
        work[col], work[piv] = work[piv], work[col]
        inv = 1 / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return [row[n:] for row in work]


def rank(a: Sequence[Sequence[Fraction]]) -> int:
    work = [list(map(Fraction, row)) for row in a]
    rows = len(work)
    cols = len(work[0]) if rows else 0
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if work[i][c] != 0), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        for i in range(r + 1, rows):
            if work[i][c] != 0:
                f = work[i][c] / work[r][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        r += 1
    return r


def determinant(a: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(a)
    work = [list(map(Fraction, row)) for row in a]
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if work[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            work[c], work[piv] = work[piv], work[c]
            det = -det
        det *= work[c][c]
        for i in range(c + 1, n):
            if work[i][c] != 0:
                f = work[i][c] / work[c][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[c])]
    return det


@dataclass(frozen=True)
class PadicMatrix:
    """A rows x cols grid of exact Q_p entries sharing one prime."""

    prime: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        check_prime(self.prime)
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.entries)
        if not rows or not rows[0]:
            raise DimensionMismatch("matrix must have at least one row and column")
        if any(len(r) != len(rows[0]) for r in rows):
            raise DimensionMismatch("ragged matrix rows")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], p: int) -> PadicMatrix:
        """Build from rows of rationals, scalar strings or PadicScalars."""
        out = []
        for row in rows:
            r = []
            for x in row:
                if isinstance(x, PadicScalar):
                    if x.prime != p:
                        raise PrimeMismatch(f"entry at prime {x.prime} in a {p}-adic matrix")
                    r.append(x.to_rational())
                else:
                    r.append(parse_rational(x))
            out.append(tuple(r))
        return cls(p, tuple(out))

    @classmethod
    def identity(cls, n: int, p: int) -> PadicMatrix:
        return cls(p, tuple(map(tuple, identity(n))))

    @classmethod
    def diag(cls, values: Sequence, p: int) -> PadicMatrix:
        n = len(values)
        vals = [parse_rational(v) for v in values]
        return cls(p, tuple(tuple(vals[i] if i == j else Fraction(0) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> PadicMatrix:
        return cls(p, tuple(tuple(Fraction(0) for _ in range(cols)) for _ in range(rows)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def n(self) -> int:
        self.require_square()
        return self.rows

    def is_square(self) -> bool:
        return self.rows == self.cols

    def require_square(self) -> None:
        if not self.is_square():
            raise NonSquare(f"expected a square matrix, got {self.rows}x{self.cols}")

    def scalar(self, i: int, j: int) -> PadicScalar:
        return PadicScalar.from_rational(self.entries[i][j], self.prime)

    def grid(self) -> Grid:
        return [list(r) for r in self.entries]

    def min_valuation(self):
        return min(valuation(x, self.prime) for row in self.entries for x in row)

    def _check(self, other: PadicMatrix) -> None:
        if other.prime != self.prime:
            raise PrimeMismatch(f"primes {self.prime} and {other.prime} differ")

    def __matmul__(self, other: PadicMatrix) -> PadicMatrix:
        self._check(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        return PadicMatrix(self.prime, tuple(map(tuple, mat_mul(self.entries, other.entries))))

    def __add__(self, other: PadicMatrix) -> PadicMatrix:
        self._check(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch")
        return PadicMatrix(
            self.prime,
            tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.entries, other.entries)),
        )

    def scale(self, c) -> PadicMatrix:
        c = parse_rational(c)
        return PadicMatrix(self.prime, tuple(tuple(c * x for x in r) for r in self.entries))

    def transpose(self) -> PadicMatrix:
        return PadicMatrix(self.prime, tuple(map(tuple, transpose(self.entries))))

    def inverse(self) -> PadicMatrix:
        self.require_square()
        return PadicMatrix(self.prime, tuple(map(tuple, inverse(self.entries))))

    def det(self) -> Fraction:
        self.require_square()
        return determinant(self.entries)

    def rank(self) -> int:
        return rank(self.entries)

    def to_strings(self) -> list[list[str]]:
        return [[format_rational(x) for x in r] for r in self.entries]

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(format_rational(x, self.prime) for x in r) + "]" for r in self.entries) + "]"
