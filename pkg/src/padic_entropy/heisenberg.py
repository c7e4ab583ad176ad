"""Heisenberg groups H_n(R) for R = Q_p (exact) and R = Z/p^k.

Elements are the unitriangular matrices M(A, B; c) written as coordinate
triples; the product is

    M(A1, B1; c1) M(A2, B2; c2) = M(A1 + A2, B1 + B2; c1 + c2 + A1.B2).

A graded endomorphism acts by a 2n x 2n matrix ``L`` on the central
quotient (coordinates ``(A, B)``), by a scalar ``delta`` on the center and
through a quadratic correction ``q`` on the c-coordinate:

    phi(A, B; c) = (L(A, B); delta*c + q(A, B)).

phi is a homomorphism iff ``L^T J L = delta J`` and ``q`` polarizes to
``beta(x, y) = (Lx)_A.(Ly)_B - delta x_A.y_B``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .entropy import EntropyValue
from .errors import (
    IncompatibleEndo,
    QuadraticCorrectionError,
    RingMismatch,
    UnsupportedCase,
    UnsupportedEndo,
)
from .lattice import (
    DEFAULT_HORIZON,
    DEFAULT_SWEEP,
    DEFAULT_WINDOW,
    PLattice,
    certify,
    cotrajectory,
)
from .matrix import PadicMatrix
from .newton import yuzvinski_entropy
from .scalars import check_prime, format_rational, parse_rational, valuation


@dataclass(frozen=True)
class QpRing:
    prime: int

    def __post_init__(self):
        check_prime(self.prime)

    def norm(self, x) -> Fraction:
        return Fraction(x)

    def __str__(self):
        return f"Q_{self.prime}"


@dataclass(frozen=True)
class ZmodRing:
    prime: int
    k: int

    def __post_init__(self):
        check_prime(self.prime)
        if self.k < 1:
            raise ValueError("k must be positive")

    @property
    def modulus(self) -> int:
        return self.prime**self.k

    def norm(self, x) -> int:
        if isinstance(x, Fraction):
            if x.denominator % self.prime == 0:
                raise ValueError(f"{x} is not p-integral")
            return x.numerator * pow(x.denominator, -1, self.modulus) % self.modulus
        return int(x) % self.modulus

    def __str__(self):
        return f"Z/{self.prime}^{self.k}"


Ring = QpRing | ZmodRing


@dataclass(frozen=True)
class HeisenbergElement:
    ring: Ring
    A: tuple
    B: tuple
    c: object

    def __post_init__(self):
        if len(self.A) != len(self.B) or not self.A:
            raise ValueError("A and B must be nonempty and of equal length")
        norm = self.ring.norm
        object.__setattr__(self, "A", tuple(norm(x) for x in self.A))
        object.__setattr__(self, "B", tuple(norm(x) for x in self.B))
        object.__setattr__(self, "c", norm(self.c))

    @property
    def n(self) -> int:
        return len(self.A)

    @classmethod
    def identity(cls, ring: Ring, n: int) -> HeisenbergElement:
        return cls(ring, (0,) * n, (0,) * n, 0)

    def is_identity(self) -> bool:
        return not any(self.A) and not any(self.B) and not self.c

    def is_central(self) -> bool:
        return not any(self.A) and not any(self.B)

    def __mul__(self, other: HeisenbergElement) -> HeisenbergElement:
        return h_mul(self, other)

    def matrix(self) -> list[list]:
        """The (n+2) x (n+2) unitriangular matrix."""
        n = self.n
        m = [[int(i == j) for j in range(n + 2)] for i in range(n + 2)]
        for i in range(n):
            m[0][1 + i] = self.A[i]
            m[1 + i][n + 1] = self.B[i]
        m[0][n + 1] = self.c
        return m


def _same(x: HeisenbergElement, y: HeisenbergElement) -> None:
    if x.ring != y.ring or x.n != y.n:
        raise RingMismatch(f"elements of H_{x.n}({x.ring}) and H_{y.n}({y.ring})")


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def h_mul(x: HeisenbergElement, y: HeisenbergElement) -> HeisenbergElement:
    _same(x, y)
    return HeisenbergElement(
        x.ring,
        tuple(a + b for a, b in zip(x.A, y.A)),
        tuple(a + b for a, b in zip(x.B, y.B)),
        x.c + y.c + _dot(x.A, y.B),
    )


def h_inv(x: HeisenbergElement) -> HeisenbergElement:
    return HeisenbergElement(x.ring, tuple(-a for a in x.A), tuple(-b for b in x.B), -x.c + _dot(x.A, x.B))


def h_commutator(x: HeisenbergElement, y: HeisenbergElement) -> HeisenbergElement:
    """[x, y] = x y x^-1 y^-1 = M(0, 0; A1.B2 - A2.B1)."""
    _same(x, y)
    return h_mul(h_mul(x, y), h_mul(h_inv(x), h_inv(y)))


# -- graded endomorphisms ----------------------------------------------------

def symplectic_form(n: int) -> list[list[int]]:
    """J with x^T J y = x_A.y_B - y_A.x_B."""
    return [[(1 if j == i + n else -1 if i == j + n else 0) for j in range(2 * n)] for i in range(2 * n)]


@dataclass(frozen=True)
class GradedEndo:
    n: int
    prime: int
    L: PadicMatrix
    delta: Fraction
    Q: Optional[tuple[tuple[Fraction, ...], ...]] = None  # upper triangular: q(x) = sum_{i<=j} Q_ij x_i x_j

    def __post_init__(self):
        check_prime(self.prime)
        object.__setattr__(self, "delta", parse_rational(self.delta))
        if self.L.prime != self.prime or (self.L.rows, self.L.cols) != (2 * self.n, 2 * self.n):
            raise ValueError(f"L must be a {2 * self.n}x{2 * self.n} matrix over Q_{self.prime}")
        if self.Q is not None:
            q = tuple(tuple(parse_rational(x) for x in row) for row in self.Q)
            if len(q) != 2 * self.n or any(len(r) != 2 * self.n for r in q):
                raise ValueError("Q must be 2n x 2n")
            if any(q[i][j] for i in range(2 * self.n) for j in range(i)):
                raise ValueError("Q must be upper triangular")
            object.__setattr__(self, "Q", q)

    @classmethod
    def identity(cls, n: int, p: int) -> GradedEndo:
        return cls(n, p, PadicMatrix.identity(2 * n, p), Fraction(1), zero_table(2 * n))

    def polarization(self) -> list[list[Fraction]]:
        """beta_ij = (L e_i)_A . (L e_j)_B - delta (e_i)_A . (e_j)_B."""
        n, L = self.n, self.L.entries
        m = 2 * n
        beta = [[sum((L[k][i] * L[n + k][j] for k in range(n)), Fraction(0)) for j in range(m)] for i in range(m)]
        for i in range(n):
            beta[i][n + i] -= self.delta
        return beta

    def with_correction(self) -> GradedEndo:
        return GradedEndo(self.n, self.prime, self.L, self.delta, solve_quadratic_correction(self))

    def is_block_diagonal(self) -> bool:
        """L maps the A-part to itself and the B-part to itself."""
        n, L = self.n, self.L.entries
        return all(L[i][n + j] == 0 and L[n + i][j] == 0 for i in range(n) for j in range(n))

    def apply(self, g: HeisenbergElement) -> HeisenbergElement:
        if self.Q is None:
            raise ValueError("the map on elements needs a quadratic correction Q")
        if g.ring != QpRing(self.prime) or g.n != self.n:
            raise RingMismatch(f"endomorphism of H_{self.n}(Q_{self.prime}) applied to H_{g.n}({g.ring})")
        x = list(g.A) + list(g.B)
        lx = [sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in self.L.entries]
        m = 2 * self.n
        q = sum((self.Q[i][j] * x[i] * x[j] for i in range(m) for j in range(i, m)), Fraction(0))
        return HeisenbergElement(g.ring, tuple(lx[: self.n]), tuple(lx[self.n:]), self.delta * g.c + q)

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "p": self.prime,
            "delta": format_rational(self.delta),
            "L": self.L.to_strings(),
        }
        if self.Q is not None:
            out["Q"] = [[format_rational(x) for x in row] for row in self.Q]
        return out

    @classmethod
    def from_json(cls, data: dict) -> GradedEndo:
        p = int(data["p"])
        q = data.get("Q")
        return cls(
            int(data["n"]),
            p,
            PadicMatrix.from_rows(data["L"], p),
            parse_rational(data["delta"]),
            None if q is None else tuple(tuple(parse_rational(x) for x in row) for row in q),
        )


def zero_table(m: int) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(0) for _ in range(m)) for _ in range(m))


def validate_graded_endo(e: GradedEndo) -> tuple[bool, Optional[str]]:
    """Check L^T J L = delta J and, if Q is given, the coboundary identity.

    Returns ``(ok, diagnostic)`` where the diagnostic names the first
    violated cell.
    """
    m = 2 * e.n
    L = e.L.entries
    J = symplectic_form(e.n)
    jl = [[sum((J[i][k] * L[k][j] for k in range(m) if J[i][k]), Fraction(0)) for j in range(m)] for i in range(m)]
    for i in range(m):
        for j in range(m):
            lhs = sum((L[k][i] * jl[k][j] for k in range(m)), Fraction(0))
            rhs = e.delta * J[i][j]
            if lhs != rhs:
                return False, f"(L^T J L)[{i}][{j}] = {lhs} but delta*J[{i}][{j}] = {rhs}"
    if e.Q is not None:
        beta = e.polarization()
        for i in range(m):
            for j in range(m):
                lhs = 2 * e.Q[i][i] if i == j else e.Q[min(i, j)][max(i, j)]
                if lhs != beta[i][j]:
                    return False, f"q(e_{i}+e_{j}) - q(e_{i}) - q(e_{j}) = {lhs} but beta[{i}][{j}] = {beta[i][j]}"
    return True, None


def solve_quadratic_correction(e: GradedEndo) -> tuple[tuple[Fraction, ...], ...]:
    """The quadratic correction q with q(x+y) - q(x) - q(y) = beta(x, y).

    At p = 2 the diagonal of beta must be even (2-adic valuation >= 1):
    halving an odd entry is refused rather than silently chosen.
    """
    ok, why = validate_graded_endo(GradedEndo(e.n, e.prime, e.L, e.delta))
    if not ok:
        raise IncompatibleEndo(why)
    beta = e.polarization()
    m = 2 * e.n
    if e.prime == 2:
        for i in range(m):
            if valuation(beta[i][i], 2) < 1:
                raise QuadraticCorrectionError(
                    f"beta[{i}][{i}] = {beta[i][i]} is not even at p = 2; refusing to halve it"
                )
    return tuple(
        tuple(beta[i][i] / 2 if i == j else beta[i][j] if i < j else Fraction(0) for j in range(m))
        for i in range(m)
    )


def _require_valid(e: GradedEndo) -> None:
    ok, why = validate_graded_endo(e)
    if not ok:
        raise IncompatibleEndo(why)


def heisenberg_entropy(e: GradedEndo) -> EntropyValue:
    """Entropy via the center/quotient decomposition.

    Injective case (delta != 0, L invertible): entropy of delta on the
    center plus entropy of L on the quotient.  delta = 0 (center in the
    kernel): entropy of L alone.
    """
    _require_valid(e)
    quotient = yuzvinski_entropy(e.L)
    if e.delta == 0:
        return quotient
    if e.L.det() == 0:
        raise UnsupportedCase("delta != 0 with singular L")
    center = yuzvinski_entropy(PadicMatrix(e.prime, ((e.delta,),)))
    return center + quotient


def heisenberg_cotrajectory_oracle(
    e: GradedEndo,
    sweep: int = DEFAULT_SWEEP,
    horizon: int = DEFAULT_HORIZON,
    window: int = DEFAULT_WINDOW,
) -> tuple[EntropyValue, dict]:
    """Cotrajectory entropy on the windows V_m = H_n(p^-m Z_p; c in p^-2m Z_p).

    |V_m : C_k| factors through the filtration Z <= H_n as the center index
    (cotrajectory of delta on p^-2m Z_p) times the quotient index
    (cotrajectory of L on p^-m Z_p^2n).
    """
    _require_valid(e)
    if e.delta == 0 and not e.is_block_diagonal():
        raise UnsupportedEndo("delta = 0 requires L to respect the A/B splitting")
    if sweep < 0 or horizon < 1 or window < 1 or horizon < 2 * window:
        raise ValueError("need sweep >= 0, positive horizon/window and horizon >= 2*window")
    p = e.prime
    center_map = PadicMatrix(p, ((e.delta,),))
    center_rows, quotient_rows, combined = [], [], []
    for m in range(sweep + 1):
        zc = cotrajectory(center_map, PLattice.standard(1, p, 2 * m), horizon).log_indices
        zq = cotrajectory(e.L, PLattice.standard(2 * e.n, p, m), horizon).log_indices
        idx = [a + b for a, b in zip(zc, zq)]
        center_rows.append({"m": m, "log_indices": zc})
        quotient_rows.append({"m": m, "log_indices": zq})
        combined.append({"m": m, "log_indices": idx, "increments": [b - a for a, b in zip(idx, idx[1:])]})
    rate = certify(combined, window)
    evidence = {"center": center_rows, "quotient": quotient_rows, "combined": combined}
    return EntropyValue.log(p, rate), evidence


def center_and_quotient_entropies(e: GradedEndo) -> tuple[EntropyValue, EntropyValue]:
    """Formula-side entropies of the two pieces of the decomposition."""
    _require_valid(e)
    return yuzvinski_entropy(PadicMatrix(e.prime, ((e.delta,),))), yuzvinski_entropy(e.L)


def block_similitude(x: Sequence[Sequence], delta, p: int, s1=None, s2=None) -> PadicMatrix:
    """L = diag(X, delta X^-T) [[I, S1], [0, I]] [[I, 0], [S2, I]].

    For symmetric S1, S2 and invertible X this satisfies L^T J L = delta J.
    """
    xm = PadicMatrix.from_rows(x, p)
    n = xm.n
    delta = parse_rational(delta)
    y = xm.inverse().transpose().scale(delta)
    zero = [[Fraction(0)] * n for _ in range(n)]
    eye = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def block(a, b, c, d):
        return PadicMatrix(p, tuple(tuple(ra + rb) for ra, rb in zip(a, b)) + tuple(tuple(rc + rd) for rc, rd in zip(c, d)))

    d = block(xm.grid(), zero, zero, y.grid())
    out = d
    if s1 is not None:
        s1g = PadicMatrix.from_rows(s1, p).grid()
        out = out @ block(eye, s1g, zero, eye)
    if s2 is not None:
        s2g = PadicMatrix.from_rows(s2, p).grid()
        out = out @ block(eye, zero, s2g, eye)
    return out
