"""Seeded random instances for suites and tests."""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import QuadraticCorrectionError
from .heisenberg import GradedEndo, block_similitude
from .matrix import PadicMatrix


def random_padic(rng: random.Random, p: int, vmin: int, vmax: int, zero_prob: float = 0.0) -> Fraction:
    """±u p^v with u a small unit and v uniform in [vmin, vmax]."""
    if zero_prob and rng.random() < zero_prob:
        return Fraction(0)
    while True:
        u = rng.randint(1, 4 * p)
        if u % p:
            break
    v = rng.randint(vmin, vmax)
    return Fraction(rng.choice((-1, 1)) * u) * Fraction(p) ** v


def random_matrix(rng: random.Random, p: int, n: int, vmin: int = -3, vmax: int = 3, zero_prob: float = 0.15) -> PadicMatrix:
    return PadicMatrix(p, tuple(tuple(random_padic(rng, p, vmin, vmax, zero_prob) for _ in range(n)) for _ in range(n)))


def random_invertible(rng: random.Random, p: int, n: int, vmin: int = -2, vmax: int = 2) -> PadicMatrix:
    while True:
        m = random_matrix(rng, p, n, vmin, vmax, zero_prob=0.3)
        if m.det() != 0:
            return m


def random_symmetric(rng: random.Random, p: int, n: int, vmin: int = 0, vmax: int = 2) -> list[list[Fraction]]:
    s = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            s[i][j] = s[j][i] = random_padic(rng, p, vmin, vmax, zero_prob=0.4)
    return s


def random_graded_endo(rng: random.Random, p: int, n: int, zero_delta_prob: float = 0.1) -> GradedEndo:
    """A compatible (L, delta) pair, with its quadratic correction when one exists.

    Most draws are similitudes diag(X, delta X^-T) times symmetric shears;
    a few have delta = 0 and L = diag(X, 0), which is compatible because
    X^T 0 = 0.
    """
    if rng.random() < zero_delta_prob:
        x = random_matrix(rng, p, n, -2, 2, zero_prob=0.3)
        m = 2 * n
        rows = [[Fraction(0)] * m for _ in range(m)]
        for i in range(n):
            for j in range(n):
                rows[i][j] = x.entries[i][j]
        e = GradedEndo(n, p, PadicMatrix(p, tuple(map(tuple, rows))), Fraction(0))
    else:
        x = random_invertible(rng, p, n)
        delta = random_padic(rng, p, -2, 2)
        s1 = random_symmetric(rng, p, n) if rng.random() < 0.5 else None
        s2 = random_symmetric(rng, p, n) if rng.random() < 0.5 else None
        e = GradedEndo(n, p, block_similitude(x.entries, delta, p, s1, s2), delta)
    try:
        return e.with_correction()
    except QuadraticCorrectionError:
        return e
