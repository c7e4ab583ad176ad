"""Enumerable finite p-groups: Heisenberg truncations H_n(Z/p^k) and cyclic groups.

Elements are plain tuples (Heisenberg) or ints (cyclic); subgroup closure is
breadth-first search over a hash set, so everything here is desk scale.
"""

from __future__ import annotations

import math
from typing import Hashable, Iterable, Optional

from .errors import BudgetExceeded
from .heisenberg import HeisenbergElement, ZmodRing
from .scalars import check_prime

DEFAULT_BUDGET = 10**6


class FiniteGroup:
    """A finite p-group given by multiplication, inversion and generators."""

    prime: int
    identity: Hashable
    generators: tuple
    name: str = "G"

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def power(self, a, e: int):
        out, base = self.identity, a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def commutator(self, a, b):
        return self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))

    def closure(self, gens: Iterable) -> frozenset:
        """Subgroup generated by ``gens``.

        Generators already inside the running subgroup are skipped, so at
        most log_p |G| of them drive a BFS.
        """
        elems = {self.identity}
        used: list = []
        for g in gens:
            if g in elems:
                continue
            used.append(g)
            frontier = list(elems)
            while frontier:
                nxt = []
                for x in frontier:
                    for h in used:
                        y = self.mul(x, h)
                        if y not in elems:
                            elems.add(y)
                            nxt.append(y)
                frontier = nxt
        return frozenset(elems)

    @property
    def elements(self) -> frozenset:
        cached = getattr(self, "_elements", None)
        if cached is None:
            cached = self.closure(self.generators)
            self._elements = cached
        return cached

    @property
    def order(self) -> int:
        return len(self.elements)

    def subgroup(self, gens: Iterable, name: Optional[str] = None) -> Subgroup:
        return Subgroup(self, tuple(gens), name=name)

    def normal_closure(self, gens: Iterable) -> Subgroup:
        elems = self.closure(gens)
        while True:
            extra = [
                self.mul(self.mul(g, h), self.inv(g))
                for g in self.generators
                for h in elems
            ]
            extra = [x for x in extra if x not in elems]
            if not extra:
                break
            elems = self.closure(list(elems) + extra)
        return Subgroup(self, tuple(sorted(elems, key=repr)), elements=elems)

    def center(self) -> Subgroup:
        gens = self.generators
        z = [x for x in self.elements if all(self.mul(x, g) == self.mul(g, x) for g in gens)]
        return Subgroup(self, tuple(z), name="Z")

    def is_subgroup_of(self, other: FiniteGroup) -> bool:
        return self.elements <= other.elements


class Subgroup(FiniteGroup):
    """A subgroup handle sharing its parent's operations."""

    def __init__(self, parent: FiniteGroup, gens: tuple, name: Optional[str] = None, elements=None):
        self.parent = parent
        self.prime = parent.prime
        self.identity = parent.identity
        self.generators = gens
        self.name = name or f"<subgroup of {parent.name}>"
        if elements is not None:
            self._elements = frozenset(elements)

    def mul(self, a, b):
        return self.parent.mul(a, b)

    def inv(self, a):
        return self.parent.inv(a)

    def __eq__(self, other):
        if isinstance(other, FiniteGroup):
            return self.elements == other.elements
        return NotImplemented

    def __hash__(self):
        return hash(self.elements)


class CyclicGroup(FiniteGroup):
    """Z/p^k written additively."""

    def __init__(self, p: int, k: int):
        check_prime(p)
        self.prime = p
        self.k = k
        self.modulus = p**k
        self.identity = 0
        self.generators = (1,)
        self.name = f"Z/{p}^{k}"

    def mul(self, a, b):
        return (a + b) % self.modulus

    def inv(self, a):
        return -a % self.modulus


class HeisenbergModGroup(FiniteGroup):
    """H_n(Z/p^k) with elements (a_1..a_n, b_1..b_n, c).

    Generators are the matrices with a single a_i = 1 (resp. b_i = 1) and
    corner entry c = 1.
    """

    def __init__(self, p: int, k: int, n: int, budget: int = DEFAULT_BUDGET):
        check_prime(p)
        if k < 1 or n < 1:
            raise ValueError("k and n must be positive")
        size = p ** (k * (2 * n + 1))
        if size > budget:
            raise BudgetExceeded(f"|H_{n}(Z/{p}^{k})| = {size} exceeds the budget {budget}")
        self.prime, self.k, self.n = p, k, n
        self.modulus = p**k
        self.ring = ZmodRing(p, k)
        self.identity = (0,) * (2 * n + 1)
        gens = []
        for i in range(2 * n):
            g = [0] * (2 * n + 1)
            g[i] = 1
            g[-1] = 1
            gens.append(tuple(g))
        self.generators = tuple(gens)
        self.name = f"H_{n}(Z/{p}^{k})"

    @property
    def expected_order(self) -> int:
        return self.modulus ** (2 * self.n + 1)

    def mul(self, x, y):
        n, q = self.n, self.modulus
        c = x[-1] + y[-1] + sum(x[i] * y[n + i] for i in range(n))
        return tuple((a + b) % q for a, b in zip(x[:-1], y[:-1])) + (c % q,)

    def inv(self, x):
        n, q = self.n, self.modulus
        c = -x[-1] + sum(x[i] * x[n + i] for i in range(n))
        return tuple(-a % q for a in x[:-1]) + (c % q,)

    def to_element(self, x) -> HeisenbergElement:
        return HeisenbergElement(self.ring, x[: self.n], x[self.n: 2 * self.n], x[-1])

    def from_element(self, g: HeisenbergElement) -> tuple:
        return tuple(g.A) + tuple(g.B) + (g.c,)

    def enumerate(self):
        """All elements, without going through the generators."""
        q = self.modulus
        return frozenset(_product_range(q, 2 * self.n + 1))


def _product_range(q: int, length: int):
    if length == 0:
        yield ()
        return
    for head in range(q):
        for tail in _product_range(q, length - 1):
            yield (head,) + tail


def finite_heisenberg_group(p: int, k: int, n: int, budget: int = DEFAULT_BUDGET) -> HeisenbergModGroup:
    return HeisenbergModGroup(p, k, n, budget)


def _log_p(x: int, p: int) -> int:
    e = round(math.log(x, p)) if x > 1 else 0
    if p**e != x:
        raise ArithmeticError(f"{x} is not a power of {p}")
    return e


def frattini_subgroup(g: FiniteGroup) -> Subgroup:
    """Frat(G) = G^p [G, G] for a finite p-group G."""
    p = g.prime
    powers = {g.power(x, p) for x in g.elements}
    comms = {g.commutator(a, b) for a in g.generators for b in g.generators}
    return g.normal_closure(sorted(powers | comms, key=repr))


def frattini_and_rank(g: FiniteGroup) -> tuple[Subgroup, int]:
    """Frattini subgroup and rank = log_p |G / Frat(G)|."""
    frat = frattini_subgroup(g)
    index, rem = divmod(g.order, frat.order)
    assert rem == 0
    return frat, _log_p(index, g.prime)


def omega_series(g: FiniteGroup, k: int) -> tuple[Subgroup, Subgroup]:
    """(Omega_k, Omega^k): generated by elements of order dividing p^k, resp. all p^k-th powers."""
    q = g.prime**k
    low = [x for x in g.elements if g.power(x, q) == g.identity]
    high = {g.power(x, q) for x in g.elements}
    return (
        g.subgroup(sorted(low, key=repr), name=f"Omega_{k}"),
        g.subgroup(sorted(high, key=repr), name=f"Omega^{k}"),
    )


def quotient_order(g: FiniteGroup, h: FiniteGroup) -> int:
    index, rem = divmod(g.order, h.order)
    if rem:
        raise ArithmeticError("not a subgroup")
    return index

