import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from padic_entropy.entropy import EntropyValue
from padic_entropy.errors import DuplicatePrime, NonSquare, PrimeMismatch, ZeroPolynomial
from padic_entropy.generators import random_invertible, random_matrix
from padic_entropy.matrix import PadicMatrix
from padic_entropy.newton import (
    char_poly,
    char_poly_rational,
    entropy_sum_over_primes,
    newton_polygon,
    newton_polygon_from_valuations,
    yuzvinski_entropy,
)
from padic_entropy.scalars import INFINITE, PadicScalar, valuation

from oracles import faddeev_leverrier, kernel_reduced


def poly(p, *coeffs):
    return [PadicScalar.from_rational(Fraction(c), p) for c in coeffs]


@pytest.mark.parametrize("p", [2, 3, 5])
def test_char_poly_examples(p):
    assert char_poly_rational(PadicMatrix.identity(2, p)) == [1, -2, 1]
    d = PadicMatrix.diag([p, Fraction(1, p)], p)
    assert char_poly_rational(d) == [1, -(p + Fraction(1, p)), 1]
    # companion matrix of x^2 - x/p - 1/p
    comp = PadicMatrix.from_rows([[0, Fraction(1, p)], [1, Fraction(1, p)]], p)
    assert char_poly_rational(comp) == [-Fraction(1, p), -Fraction(1, p), 1]
    assert [c.to_rational() for c in char_poly(comp)] == char_poly_rational(comp)


def test_char_poly_matches_faddeev_leverrier():
    rng = random.Random(11)
    for _ in range(60):
        p = rng.choice([2, 3, 5])
        m = random_matrix(rng, p, rng.randint(1, 5))
        assert char_poly_rational(m) == faddeev_leverrier(m.entries)


def test_char_poly_nonsquare():
    with pytest.raises(NonSquare):
        char_poly(PadicMatrix.from_rows([[1, 2]], 3))


@pytest.mark.parametrize("p", [2, 3, 7])
def test_polygon_examples(p):
    lin = newton_polygon(poly(p, -Fraction(1, p), 1))
    assert lin.segments == ((1, 1),) and lin.root_valuations() == [-1]
    quad = newton_polygon(poly(p, -Fraction(1, p), -Fraction(1, p), 1))
    assert quad.segments == ((0, 1), (1, 1))
    # (x - 1)^4
    assert newton_polygon(poly(p, 1, -4, 6, -4, 1)).segments == ((0, 4),)


def test_polygon_zero_roots_and_errors():
    pg = newton_polygon(poly(3, 0, 0, 9, 1))
    assert pg.zero_roots == 2 and pg.segments == ((-2, 1),)
    assert pg.root_valuations() == [INFINITE, INFINITE, 2]
    with pytest.raises(ZeroPolynomial):
        newton_polygon(poly(3, 0, 0))
    with pytest.raises(ZeroPolynomial):
        newton_polygon(poly(3, 1, 0))
    with pytest.raises(ZeroPolynomial):
        newton_polygon([])
    with pytest.raises(PrimeMismatch):
        newton_polygon([PadicScalar.from_rational(1, 2), PadicScalar.from_rational(1, 3)])


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_entropy_examples(p):
    assert yuzvinski_entropy(PadicMatrix.identity(3, p)).is_zero()
    assert yuzvinski_entropy(PadicMatrix.diag([Fraction(1, p)], p)) == EntropyValue.log(p)
    assert yuzvinski_entropy(PadicMatrix.diag([p, Fraction(1, p)], p)) == EntropyValue.log(p)
    assert yuzvinski_entropy(PadicMatrix.zeros(2, 2, p)).is_zero()


def test_entropy_log5_display():
    h = yuzvinski_entropy(PadicMatrix.from_rows([["1/5", "0"], ["0", "5"]], 5))
    assert h == EntropyValue.log(5)
    assert h.decimal() == "1.6094379124341003746"


def test_sum_over_primes():
    h = entropy_sum_over_primes([(2, PadicMatrix.diag(["1/2"], 2)), (3, PadicMatrix.diag(["1/3"], 3))])
    assert h == EntropyValue.log(2) + EntropyValue.log(3)
    assert entropy_sum_over_primes([]) == EntropyValue.zero()
    assert entropy_sum_over_primes([(5, PadicMatrix.identity(3, 5))]).is_zero()
    with pytest.raises(DuplicatePrime):
        entropy_sum_over_primes([(2, PadicMatrix.identity(1, 2)), (2, PadicMatrix.identity(1, 2))])
    with pytest.raises(PrimeMismatch):
        entropy_sum_over_primes([(3, PadicMatrix.identity(1, 2))])


# -- properties ------------------------------------------------------------------

vals = st.one_of(st.integers(-6, 6), st.just(INFINITE))


@given(st.lists(vals, min_size=1, max_size=8), st.integers(-6, 6))
def test_degree_conservation(body, lead):
    pg = newton_polygon_from_valuations(body + [lead])
    if all(v == INFINITE for v in body) and body:
        assert pg.zero_roots == len(body)
    assert pg.degree == len(body)
    slopes = [s for s, _ in pg.segments]
    assert slopes == sorted(set(slopes))


@given(st.lists(vals, min_size=0, max_size=7), st.integers(-6, 6), st.integers(-6, 6))
def test_valuation_sum_matches_constant_term(body, a0, an):
    pg = newton_polygon_from_valuations([a0] + body + [an])
    assert pg.zero_roots == 0
    assert sum(pg.root_valuations()) == a0 - an


@given(st.sampled_from([2, 3, 5]), st.integers(1, 4), st.integers(0, 2**32))
@settings(max_examples=40, deadline=None)
def test_similarity_invariance(p, n, seed):
    rng = random.Random(seed)
    m = random_matrix(rng, p, n)
    s = random_invertible(rng, p, n)
    assert yuzvinski_entropy(s.inverse() @ m @ s) == yuzvinski_entropy(m)


@given(st.sampled_from([2, 3, 5]), st.integers(1, 4), st.integers(0, 2**32))
@settings(max_examples=40, deadline=None)
def test_kernel_reduction(p, n, seed):
    rng = random.Random(seed)
    m = random_matrix(rng, p, n, zero_prob=0.5)
    q = kernel_reduced(m)
    assert yuzvinski_entropy(m) == (EntropyValue.zero() if q is None else yuzvinski_entropy(q))


@given(st.sampled_from([2, 3, 5]), st.lists(st.tuples(st.integers(-3, 3), st.integers(0, 3), st.booleans()), min_size=1, max_size=4))
def test_aligned_diagonal_additivity(p, cells):
    # each coordinate expands (or contracts) under both maps
    a, b = [], []
    for va, mag, expanding in cells:
        sign = -1 if expanding else 1
        a.append(Fraction(p) ** (sign * abs(va)))
        b.append(Fraction(p) ** (sign * mag) * (p + 1))
    da, db = PadicMatrix.diag(a, p), PadicMatrix.diag(b, p)
    assert yuzvinski_entropy(da @ db) == yuzvinski_entropy(da) + yuzvinski_entropy(db)


def test_entropy_independent_of_root_count_at_zero():
    # nilpotent part contributes nothing
    m = PadicMatrix.from_rows([[0, "1/9"], [0, 0]], 3)
    assert yuzvinski_entropy(m).is_zero()
    assert valuation(0, 3) == INFINITE
