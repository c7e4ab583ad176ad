"""Acceptance criteria, one test each, each printing a single PASS/FAIL line."""

import random
import time
from fractions import Fraction

import pytest

from padic_entropy import classifier as cl
from padic_entropy.entropy import EntropyValue
from padic_entropy.generators import random_invertible, random_matrix, random_padic
from padic_entropy.heisenberg import HeisenbergElement, QpRing, ZmodRing, h_commutator, h_inv
from padic_entropy.lattice import PLattice, cotrajectory, cotrajectory_entropy
from padic_entropy.matrix import PadicMatrix
from padic_entropy.newton import entropy_sum_over_primes, yuzvinski_entropy
from padic_entropy.suites import classifier_suite, finite_groups_suite, heisenberg_suite, oracle_vs_formula

from oracles import kernel_reduced


@pytest.fixture
def verdict(capsys):
    """Time the body, print one line, then fail the test if the criterion failed."""
    state = {}

    def record(number, title, ok, detail, budget=None):
        elapsed = time.perf_counter() - state["start"]
        ok = ok and (budget is None or elapsed < budget)
        limit = f" < {budget:g}s" if budget is not None else ""
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}  [{detail}; {elapsed:.2f}s{limit}]"
        with capsys.disabled():
            print("\n" + line)
        assert ok, line

    state["start"] = time.perf_counter()
    return record


def test_criterion_1_closed_form(verdict):
    failures = []
    for p in (2, 3, 5, 7):
        a = PadicMatrix.diag([Fraction(1, p)], p)
        if yuzvinski_entropy(a) != EntropyValue.log(p):
            failures.append(f"formula p={p}")
        traj = cotrajectory(a, PLattice.standard(1, p), 12)
        if traj.log_indices != list(range(12)) or set(traj.increments) != {1}:
            failures.append(f"index table p={p}")
        if cotrajectory_entropy(a)[0] != EntropyValue.log(p):
            failures.append(f"oracle p={p}")
    verdict(1, "x -> x/p has entropy log p, indices 1, p, p^2, ...", not failures, ", ".join(failures) or "p in 2,3,5,7", 1.0)


def test_criterion_2_oracle_equals_formula(verdict):
    rep = oracle_vs_formula(seed=0, count=50, sweep=6, horizon=40, window=8)
    verdict(2, "cotrajectory oracle equals Newton formula", rep.passed, rep.summary, 120.0)


def test_criterion_3_heisenberg_addition(verdict):
    rep = heisenberg_suite(seed=0, count=20)
    cells = ", ".join(f"({r['p']},{r['n']}):{r['equal']}/{r['instances']}+{r['positive']}" for r in rep.rows)
    verdict(3, "center plus quotient equals Heisenberg oracle", rep.passed, cells, 120.0)


def test_criterion_4_finite_ranks(verdict):
    rep = finite_groups_suite()
    ranks = ", ".join(f"({r['p']},{r['k']},{r['n']})->{r['rank']}" for r in rep.rows)
    verdict(4, "Frattini rank of H_n(Z/p^k) is 2n", rep.passed, ranks, 30.0)


def _element(rng, ring, n):
    if isinstance(ring, ZmodRing):
        draw = lambda: rng.randrange(ring.modulus)  # noqa: E731
    else:
        draw = lambda: random_padic(rng, ring.prime, -3, 3, zero_prob=0.2)  # noqa: E731
    return HeisenbergElement(ring, tuple(draw() for _ in range(n)), tuple(draw() for _ in range(n)), draw())


def test_criterion_5_group_law(verdict):
    rng = random.Random("acceptance-5")
    rings = [QpRing(2), QpRing(3), QpRing(5), ZmodRing(2, 3), ZmodRing(3, 2), ZmodRing(5, 1)]
    law_fail = class2_fail = 0
    for i in range(10_000):
        ring, n = rings[i % len(rings)], 1 + i % 3
        x, y, z = (_element(rng, ring, n) for _ in range(3))
        ok = (x * y) * z == x * (y * z)
        ok &= (x * h_inv(x)).is_identity() and (h_inv(x) * x).is_identity()
        ok &= h_commutator(x, y).is_central()
        law_fail += not ok
    for i in range(1_000):
        ring, n = rings[i % len(rings)], 1 + i % 3
        x, y, z = (_element(rng, ring, n) for _ in range(3))
        class2_fail += not h_commutator(h_commutator(x, y), z).is_identity()
    detail = f"{law_fail}/10000 law failures, {class2_fail}/1000 class-2 failures"
    verdict(5, "Heisenberg group law over Q_p and Z/p^k", law_fail == class2_fail == 0, detail)


def test_criterion_6_classifier_table(verdict):
    rep = classifier_suite()
    h = cl.classify(cl.Heisenberg(5, 3))
    ok = rep.passed and h.entropy_class is cl.EntropyClass.FINITE_NOT_E0 and h.p_rank == 6
    verdict(6, "classifier example table with citation traces", ok, rep.summary)


def test_criterion_7_sum_over_primes(verdict):
    h = entropy_sum_over_primes([(2, PadicMatrix.diag(["1/2"], 2)), (3, PadicMatrix.diag(["1/3"], 3))])
    ok = h == EntropyValue.log(2) + EntropyValue.log(3) and entropy_sum_over_primes([]) == EntropyValue.zero()
    verdict(7, "sum over primes is log 2 + log 3, empty sum is 0", ok, str(h))


def test_criterion_8_invariants(verdict):
    rng = random.Random("acceptance-8")
    sim_fail = ker_fail = 0
    for i in range(100):
        p, n = (2, 3, 5)[i % 3], 1 + i % 4
        m = random_matrix(rng, p, n)
        s = random_invertible(rng, p, n)
        sim_fail += yuzvinski_entropy(s.inverse() @ m @ s) != yuzvinski_entropy(m)
    for i in range(100):
        p, n = (2, 3, 5)[i % 3], 1 + i % 4
        m = random_matrix(rng, p, n, zero_prob=0.5)
        q = kernel_reduced(m)
        ker_fail += yuzvinski_entropy(m) != (EntropyValue.zero() if q is None else yuzvinski_entropy(q))
    detail = f"{sim_fail}/100 similarity failures, {ker_fail}/100 kernel-reduction failures"
    verdict(8, "entropy is similarity and kernel-reduction invariant", sim_fail == ker_fail == 0, detail)
