"""Z_p-lattices in Q_p^n and the brute-force cotrajectory entropy oracle.

A lattice is stored as ``p**(-shift) * H`` where the columns of the integer
matrix ``H`` span it and ``H`` is in canonical column Hermite form: upper
triangular, diagonal entries ``p**e_i``, entries right of a diagonal
``p**e_i`` reduced into ``[0, p**e_i)``.  ``shift`` is the least integer
making the basis integral, so two lattices are equal iff their
``(shift, H)`` pairs are identical.

Hermite forms are computed modulo ``p**K`` for a ``K`` with ``p**K Z_p^n``
inside the span, which keeps every intermediate integer bounded.

The oracle never consults eigenvalues: it intersects lattices and reads
indices off determinant valuations, so it is an independent check on
:func:`padic_entropy.newton.yuzvinski_entropy`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Sequence

from .entropy import EntropyValue
from .errors import DimensionMismatch, NotASublattice, NotStabilized, PrimeMismatch, SingularBasis
from .matrix import PadicMatrix, determinant, inverse, mat_mul, rank, transpose
from .scalars import check_prime, int_valuation, valuation

DEFAULT_SWEEP = 6
DEFAULT_HORIZON = 40
DEFAULT_WINDOW = 8


def _hnf_mod(gens: Sequence[Sequence[int]], n: int, p: int, k: int) -> tuple[list[list[int]], list[int]]:
    """Canonical Hermite basis (columns) of span(gens) + p**k Z_p^n.

    Callers guarantee p**k Z_p^n is already inside span(gens), so the result
    is the Hermite basis of span(gens) itself.
    """
    big = p**k
    pool = [[x % big for x in g] for g in gens]
    pool = [g for g in pool if any(g)]
    for r in range(n):
        e = [0] * n
        e[r] = big
        pool.append(e)
    pivots: list[list[int]] = [None] * n  # type: ignore[list-item]
    exps = [0] * n
    for i in range(n - 1, -1, -1):
        best, best_v = -1, k + 1
        for idx, c in enumerate(pool):
            x = c[i]
            if x:
                v = int_valuation(x, p)
                if v < best_v:
                    best, best_v = idx, v
                    if v == 0:
                        break
        piv = pool.pop(best)
        pv = p**best_v
        u = piv[i] // pv
        if u != 1:
            uinv = pow(u, -1, big)
            piv = [(x * uinv) % big for x in piv[:i]] + [pv] + [0] * (n - i - 1)
        nxt = []
        for c in pool:
            x = c[i]
            if x:
                f = x // pv
                for r in range(i):
                    c[r] = (c[r] - f * piv[r]) % big
                c[i] = 0
                if not any(c[:i]):
                    continue
            nxt.append(c)
        pool = nxt
        pivots[i] = piv
        exps[i] = best_v
    for j in range(1, n):
        col = pivots[j]
        for i in range(j - 1, -1, -1):
            q = col[i] // p ** exps[i]
            if q:
                piv = pivots[i]
                for r in range(i + 1):
                    col[r] -= q * piv[r]
    return pivots, exps


def _adj_upper(h: Sequence[Sequence[int]], exps: Sequence[int], p: int) -> list[list[int]]:
    """Adjugate (as rows) of an upper-triangular integer matrix with p-power diagonal."""
    n = len(h)
    det = p ** sum(exps)
    adj = [[0] * n for _ in range(n)]
    for col in range(n):
        for i in range(col, -1, -1):
            acc = det if i == col else 0
            for j in range(i + 1, col + 1):
                acc -= h[i][j] * adj[j][col]
            q, rem = divmod(acc, h[i][i])
            assert rem == 0
            adj[i][col] = q
    return adj


def _int_matmul(a, b):
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


@dataclass(frozen=True)
class PLattice:
    """A full-rank Z_p-lattice in Q_p^n in canonical Hermite form."""

    prime: int
    shift: int
    hnf: tuple[tuple[int, ...], ...]  # rows of H; lattice = p**-shift * colspan(H)

    @classmethod
    def _from_hermite(cls, p: int, shift: int, cols: list[list[int]], exps: list[int]) -> PLattice:
        n = len(cols)
        rows = [[cols[j][i] for j in range(n)] for i in range(n)]
        # strip common factors of p so that shift is minimal
        while all(x % p == 0 for row in rows for x in row):
            rows = [[x // p for x in row] for row in rows]
            shift -= 1
        return cls(p, shift, tuple(map(tuple, rows)))

    @classmethod
    def _from_int_columns(cls, p: int, shift: int, cols: Sequence[Sequence[int]], k: int) -> PLattice:
        cols_h, exps = _hnf_mod(cols, len(cols[0]), p, k)
        return cls._from_hermite(p, shift, cols_h, exps)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], p: int) -> PLattice:
        """Lattice spanned by arbitrary rational generators (must have full rank)."""
        check_prime(p)
        cols = [[Fraction(x) for x in c] for c in cols]
        if not cols:
            raise SingularBasis("no generators")
        n = len(cols[0])
        if any(len(c) != n for c in cols):
            raise DimensionMismatch("generators of different lengths")
        if rank(transpose(cols)) < n:
            raise SingularBasis("generators do not span a full-rank lattice")
        shift = max(0, max(-valuation(x, p) for c in cols for x in c if x))
        ints = []
        for c in cols:
            # the p-free part of the denominators is a unit; scale it away
            unit = lcm(*(x.denominator // p ** int_valuation(x.denominator, p) for x in c))
            ints.append([int(x * unit * Fraction(p) ** shift) for x in c])
        basis = _independent_subset(ints, n)
        k = int_valuation(int(determinant(transpose(basis))), p)
        return cls._from_int_columns(p, shift, ints, k)

    @classmethod
    def from_matrix(cls, basis: PadicMatrix) -> PLattice:
        """Lattice spanned by the columns of ``basis``."""
        basis.require_square()
        return cls.from_columns(transpose(basis.entries), basis.prime)

    @classmethod
    def standard(cls, n: int, p: int, m: int = 0) -> PLattice:
        """The window p^(-m) Z_p^n."""
        check_prime(p)
        return cls(p, m, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.hnf)

    @cached_property
    def basis(self) -> tuple[tuple[Fraction, ...], ...]:
        s = Fraction(self.prime) ** (-self.shift)
        return tuple(tuple(x * s for x in row) for row in self.hnf)

    def columns(self) -> list[list[Fraction]]:
        return transpose(self.basis)

    @cached_property
    def _exps(self) -> list[int]:
        return [int_valuation(self.hnf[i][i], self.prime) for i in range(self.dim)]

    def exponents(self) -> list[int]:
        """Valuations of the diagonal of the rational basis."""
        return [e - self.shift for e in self._exps]

    def log_covolume(self) -> int:
        """v_p(det basis); smaller lattices have larger values."""
        return sum(self._exps) - self.dim * self.shift

    def matrix(self) -> PadicMatrix:
        return PadicMatrix(self.prime, self.basis)

    def contains(self, other: PLattice) -> bool:
        _check_pair(self, other)
        t = mat_mul(inverse(self.basis), other.basis)
        return all(valuation(x, self.prime) >= 0 for row in t for x in row)

    def contains_vector(self, vec: Sequence) -> bool:
        coords = mat_mul(inverse(self.basis), [[Fraction(x)] for x in vec])
        return all(valuation(r[0], self.prime) >= 0 for r in coords)

    def dual(self) -> PLattice:
        """{y : <x, y> in Z_p for all x in self}."""
        # (p^-t H)^-T = p^(t - E) adj(H)^T
        p, n = self.prime, self.dim
        adj = _adj_upper(self.hnf, self._exps, p)
        e = sum(self._exps)
        return PLattice._from_int_columns(p, e - self.shift, adj, (n - 1) * e)

    def scaled(self, power: int) -> PLattice:
        """p**power * self."""
        return PLattice(self.prime, self.shift - power, self.hnf)

    def __str__(self):
        return f"p^{-self.shift}*{[list(r) for r in self.hnf]} (p={self.prime})"


def _independent_subset(cols: list[list[int]], n: int) -> list[list[int]]:
    chosen: list[list[int]] = []
    for c in cols:
        if rank(chosen + [c]) > len(chosen):
            chosen.append(c)
            if len(chosen) == n:
                break
    return chosen


def _check_pair(a: PLattice, b: PLattice) -> None:
    if a.prime != b.prime:
        raise PrimeMismatch(f"lattices over {a.prime} and {b.prime}")
    if a.dim != b.dim:
        raise DimensionMismatch(f"lattices of dimension {a.dim} and {b.dim}")


def lattice_index(lat: PLattice, sub: PLattice) -> int:
    """log_p |lat : sub|."""
    if not lat.contains(sub):
        raise NotASublattice("second lattice is not contained in the first")
    return sub.log_covolume() - lat.log_covolume()


def lattice_sum(a: PLattice, b: PLattice) -> PLattice:
    _check_pair(a, b)
    p = a.prime
    t = max(a.shift, b.shift)
    cols = [[x * p ** (t - a.shift) for x in c] for c in zip(*a.hnf)]
    cols += [[x * p ** (t - b.shift) for x in c] for c in zip(*b.hnf)]
    # span contains p^(t - a.shift) * colspan(H_a), which contains p^(t - a.shift + E_a) Z^n
    return PLattice._from_int_columns(p, t, cols, t - a.shift + sum(a._exps))


def lattice_intersect(a: PLattice, b: PLattice) -> PLattice:
    """a ∩ b, computed as the dual of the sum of the duals."""
    _check_pair(a, b)
    return lattice_sum(a.dual(), b.dual()).dual()


class _IntMap:
    """A rational matrix written as ``p**-shift / unit * ints``."""

    __slots__ = ("ints", "shift")

    def __init__(self, a: PadicMatrix):
        p = a.prime
        d = lcm(*(x.denominator for row in a.entries for x in row))
        self.ints = [[int(x * d) for x in row] for row in a.entries]
        self.shift = int_valuation(d, p)


def _preimage_meet(amap: _IntMap, p: int, target: PLattice, within: PLattice) -> PLattice:
    n = target.dim
    # coordinates y of x = B_w y must satisfy M y in Z_p^n, M = B_t^-1 A B_w
    #   = p^s * adj(H_t) A_int H_w / unit
    et = sum(target._exps)
    s = target.shift - within.shift - et - amap.shift
    if s >= 0:
        return within  # M is integral: every y works
    adj_t = _adj_upper(target.hnf, target._exps, p)
    m = _int_matmul(_int_matmul(adj_t, amap.ints), within.hnf)
    k = -s
    # generators of S' = p^-s S: p^-s e_i and the rows of m (units dropped)
    g_cols, g_exps = _hnf_mod(m, n, p, k)
    eg = sum(g_exps)
    # Y = S^-T = p^-s G^-T = p^(-s - E_g) adj(G)^T;  X = B_w Y
    g_rows = [[g_cols[j][i] for j in range(n)] for i in range(n)]
    adj_g = _adj_upper(g_rows, g_exps, p)
    x_int = _int_matmul(within.hnf, transpose(adj_g))
    shift = within.shift + s + eg
    return PLattice._from_int_columns(p, shift, transpose(x_int), sum(within._exps) + (n - 1) * eg)


def preimage_meet(a: PadicMatrix, target: PLattice, within: PLattice) -> PLattice:
    """{x in within : a x in target}.

    Singular ``a`` is fine: the result contains p^k * within for some k, so
    it is still a full-rank lattice.
    """
    _check_pair(target, within)
    if a.prime != target.prime:
        raise PrimeMismatch(f"map over {a.prime}, lattices over {target.prime}")
    if a.rows != target.dim or a.cols != target.dim:
        raise DimensionMismatch(f"{a.rows}x{a.cols} map on dimension {target.dim}")
    return _preimage_meet(_IntMap(a), a.prime, target, within)


@dataclass
class Cotrajectory:
    """C_1 = V, C_{k+1} = V ∩ A^{-1}(C_k), with log_p |V : C_k|."""

    map: PadicMatrix
    window: PLattice
    steps: list[tuple[PLattice, int]] = field(default_factory=list)

    @property
    def log_indices(self) -> list[int]:
        return [idx for _, idx in self.steps]

    @property
    def increments(self) -> list[int]:
        idx = self.log_indices
        return [b - a for a, b in zip(idx, idx[1:])]


def cotrajectory(a: PadicMatrix, window: PLattice, horizon: int) -> Cotrajectory:
    if a.prime != window.prime:
        raise PrimeMismatch(f"map over {a.prime}, window over {window.prime}")
    if a.rows != window.dim or a.cols != window.dim:
        raise DimensionMismatch(f"{a.rows}x{a.cols} map on dimension {window.dim}")
    amap = _IntMap(a)
    traj = Cotrajectory(a, window, [(window, 0)])
    base = window.log_covolume()
    c = window
    for _ in range(horizon - 1):
        c = _preimage_meet(amap, a.prime, c, window)
        traj.steps.append((c, c.log_covolume() - base))
    return traj


def stable_increment(increments: Sequence[int], window: int):
    """The common value of the last ``window`` increments, or None."""
    if len(increments) < window:
        return None
    tail = increments[-window:]
    return tail[0] if all(d == tail[0] for d in tail) else None


def sweep_table(
    a: PadicMatrix,
    sweep: int = DEFAULT_SWEEP,
    horizon: int = DEFAULT_HORIZON,
    window: int = DEFAULT_WINDOW,
) -> list[dict]:
    """Per-window cotrajectory evidence for p^(-m) Z_p^n, m = 0..sweep."""
    a.require_square()
    if sweep < 0 or horizon < 1 or window < 1:
        raise ValueError("sweep must be >= 0, horizon and window positive")
    if horizon < 2 * window:
        raise ValueError("horizon must be at least twice the window")
    table = []
    for m in range(sweep + 1):
        traj = cotrajectory(a, PLattice.standard(a.n, a.prime, m), horizon)
        incs = traj.increments
        table.append({"m": m, "log_indices": traj.log_indices, "increments": incs})
    return table


def certify(table: list[dict], window: int) -> int:
    """Largest certified per-window rate (in units of log p) of an evidence table.

    Annotates each row with ``stabilized``/``rate``; raises NotStabilized.
    """
    for row in table:
        rate = stable_increment(row["increments"], window)
        row["stabilized"] = rate is not None
        row["rate"] = rate
    unstable = [row["m"] for row in table if not row["stabilized"]]
    if unstable:
        raise NotStabilized(f"increments did not stabilize for windows m={unstable}", table)
    rates = [row["rate"] for row in table]
    if len(rates) > 1 and rates[-1] > max(rates[:-1]):
        raise NotStabilized("sweep maximum still growing at the last window", table)
    return max(rates)


def cotrajectory_entropy(
    a: PadicMatrix,
    sweep: int = DEFAULT_SWEEP,
    horizon: int = DEFAULT_HORIZON,
    window: int = DEFAULT_WINDOW,
) -> tuple[EntropyValue, list[dict]]:
    """Entropy of x -> a x on Q_p^n by brute-force cotrajectories.

    Sweeps the windows p^(-m) Z_p^n for m = 0..sweep and returns the largest
    certified growth rate together with the per-window evidence table.
    Raises :class:`NotStabilized` when some window's increments are not
    constant over the last ``window`` steps, or the sweep maximum is still
    growing at the last window.
    """
    table = sweep_table(a, sweep, horizon, window)
    return EntropyValue.log(a.prime, certify(table, window)), table


def invariant_basis_certificate(a: PadicMatrix) -> bool:
    """True iff a maps Z_p^n into itself, so {p^k Z_p^n} is an invariant local basis."""
    a.require_square()
    return all(valuation(x, a.prime) >= 0 for row in a.entries for x in row)
