"""Named end-to-end check suites with per-case tables."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from . import classifier as cl
from .errors import NotStabilized
from .finite_groups import HeisenbergModGroup, frattini_and_rank
from .generators import random_graded_endo, random_matrix
from .heisenberg import heisenberg_cotrajectory_oracle, heisenberg_entropy
from .lattice import DEFAULT_HORIZON, DEFAULT_SWEEP, DEFAULT_WINDOW, cotrajectory_entropy
from .newton import yuzvinski_entropy


@dataclass
class SuiteReport:
    name: str
    rows: list[dict] = field(default_factory=list)
    passed: bool = True
    summary: str = ""

    def to_json(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "summary": self.summary, "cases": self.rows}

    def table(self) -> str:
        if not self.rows:
            return f"{self.name}: no cases"
        cols = list(self.rows[0])
        cells = [[str(r.get(c, "")) for c in cols] for r in self.rows]
        widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
        lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
        lines.append("  ".join("-" * w for w in widths))
        lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
        lines.append(f"{self.name}: {'PASS' if self.passed else 'FAIL'} ({self.summary})")
        return "\n".join(lines)


def _rng(seed: int, *key) -> random.Random:
    return random.Random(":".join(str(k) for k in (seed, *key)))


def oracle_vs_formula(
    seed: int = 0,
    count: int = 50,
    primes=(2, 3, 5),
    dims=(1, 2, 3),
    sweep: int = DEFAULT_SWEEP,
    horizon: int = DEFAULT_HORIZON,
    window: int = DEFAULT_WINDOW,
) -> SuiteReport:
    """Cotrajectory entropy against the Newton-polygon formula on random matrices."""
    rep = SuiteReport("oracle-vs-formula")
    total = stabilized = mismatches = 0
    for p in primes:
        for n in dims:
            rng = _rng(seed, p, n)
            ok = bad = unstable = 0
            for _ in range(count):
                a = random_matrix(rng, p, n)
                try:
                    h, _table = cotrajectory_entropy(a, sweep, horizon, window)
                except NotStabilized:
                    unstable += 1
                    continue
                if h == yuzvinski_entropy(a):
                    ok += 1
                else:
                    bad += 1
            total += count
            stabilized += ok + bad
            mismatches += bad
            rep.rows.append({"p": p, "n": n, "instances": count, "equal": ok, "mismatch": bad, "not_stabilized": unstable})
    rate = stabilized / total if total else 1.0
    rep.passed = mismatches == 0 and rate >= 0.95
    rep.summary = f"{mismatches} mismatches, {stabilized}/{total} stabilized"
    return rep


def heisenberg_suite(
    seed: int = 0,
    count: int = 20,
    cases=((2, 1), (2, 2), (3, 1), (3, 2), (5, 1), (5, 2)),
    sweep: int = DEFAULT_SWEEP,
    horizon: int = DEFAULT_HORIZON,
    window: int = DEFAULT_WINDOW,
) -> SuiteReport:
    """Center-plus-quotient formula against the Heisenberg cotrajectory oracle."""
    rep = SuiteReport("heisenberg")
    for p, n in cases:
        rng = _rng(seed, "heisenberg", p, n)
        equal = positive = failures = 0
        for _ in range(count):
            e = random_graded_endo(rng, p, n)
            h = heisenberg_entropy(e)
            try:
                o, _ = heisenberg_cotrajectory_oracle(e, sweep, horizon, window)
            except NotStabilized:
                failures += 1
                continue
            if o == h:
                equal += 1
                positive += not h.is_zero()
            else:
                failures += 1
        row_ok = failures == 0 and positive > 0
        rep.passed &= row_ok
        rep.rows.append({"p": p, "n": n, "instances": count, "equal": equal, "positive": positive, "pass": row_ok})
    rep.summary = f"{sum(r['equal'] for r in rep.rows)}/{sum(r['instances'] for r in rep.rows)} equal"
    return rep


FINITE_CASES = [(p, k, 1) for p in (2, 3, 5) for k in (1, 2)] + [(2, 1, 2), (3, 1, 2)]


def finite_groups_suite(cases=FINITE_CASES) -> SuiteReport:
    """Frattini rank of H_n(Z/p^k) is 2n; Frat = center when k = 1, p odd."""
    rep = SuiteReport("finite-groups")
    for p, k, n in cases:
        g = HeisenbergModGroup(p, k, n)
        frat, rank = frattini_and_rank(g)
        center_check = "-"
        row_ok = rank == 2 * n
        if k == 1 and p != 2:
            center_check = frat == g.center()
            row_ok &= center_check
        rep.passed &= row_ok
        rep.rows.append({"p": p, "k": k, "n": n, "order": g.order, "rank": rank, "expected": 2 * n, "frat=center": center_check, "pass": row_ok})
    rep.summary = f"{sum(r['pass'] for r in rep.rows)}/{len(rep.rows)} cases"
    return rep


@dataclass(frozen=True)
class ClassifierCase:
    label: str
    run: Callable[[], object]
    expected: object
    rules: tuple[str, ...] = ()


CLASSIFIER_CASES = [
    ClassifierCase("Z_p -> E0", lambda: cl.classify(cl.PadicLCA(3, alpha=1)), ("E0", 1, "NotApplicable"), ("cor-3.2", "thm-3.6")),
    ClassifierCase("Q_p -> FiniteNotE0", lambda: cl.classify(cl.PadicLCA(3, beta=1)), ("FiniteNotE0", 1, "NotApplicable"), ("thm-3.5", "thm-3.6")),
    ClassifierCase(
        "R + Z^2 + T^3 -> Finite",
        lambda: cl.classify(cl.CompactlyGeneratedLCA(1, 2, cl.CompactPart(cl.CompactKind.TORUS, 3))),
        ("Finite", "NotApplicable", "No"),
        ("thm-1.2b",),
    ),
    ClassifierCase(
        "Z^5 -> E0, slender",
        lambda: cl.classify(cl.CompactlyGeneratedLCA(0, 5)),
        ("E0", "NotApplicable", "Yes"),
        ("thm-1.2a", "lem-2.1v"),
    ),
    ClassifierCase("H_2(Q_3) -> FiniteNotE0", lambda: cl.classify(cl.Heisenberg(3, 2)), ("FiniteNotE0", 4, "NotApplicable"), ("thm-1.4",)),
    ClassifierCase(
        "infinite-dim connected K -> NotFinite",
        lambda: cl.classify(cl.CompactlyGeneratedLCA(0, 0, cl.CompactPart(cl.CompactKind.CONNECTED_INFINITE_DIM))),
        ("NotFinite", "NotApplicable", "No"),
        ("thm-3.7-i",),
    ),
    ClassifierCase(
        "product Z_2 x Q_3 -> FiniteNotE0",
        lambda: cl.classify(cl.ProductOverPrimes((cl.PadicLCA(2, alpha=1), cl.PadicLCA(3, beta=1)))),
        ("FiniteNotE0", "NotApplicable", "NotApplicable"),
        ("thm-3.7-iv",),
    ),
    ClassifierCase(
        "product Z_2 x Z(3^inf) -> E0",
        lambda: cl.classify(cl.ProductOverPrimes((cl.PadicLCA(2, alpha=1), cl.PadicLCA(3, gamma=1)))),
        ("E0", "NotApplicable", "NotApplicable"),
        ("thm-3.7-iv",),
    ),
    ClassifierCase(
        "unspecified K -> Unknown",
        lambda: cl.classify(cl.CompactlyGeneratedLCA(0, 1, cl.CompactPart(cl.CompactKind.UNSPECIFIED))),
        ("Unknown", "NotApplicable", "Unknown"),
    ),
    ClassifierCase("rank {2,1,0,3} = 6", lambda: cl.p_rank(cl.PadicLCA(2, 2, 1, 0, 3)), 6),
    ClassifierCase("rank H_1 = 2", lambda: cl.p_rank(cl.Heisenberg(2, 1)), 2),
    ClassifierCase("rank of zeros = 0", lambda: cl.p_rank(cl.PadicLCA(5)), 0),
    ClassifierCase("dual {2,1,0,0} = {0,1,2,0}", lambda: cl.pontryagin_dual(cl.PadicLCA(2, 2, 1, 0, 0)), cl.PadicLCA(2, 0, 1, 2, 0)),
    ClassifierCase("dual keeps rank", lambda: cl.p_rank(cl.pontryagin_dual(cl.PadicLCA(7, 3, 1, 4, 2))), 10),
    ClassifierCase("slender Z^3", lambda: cl.is_slender(cl.CompactlyGeneratedLCA(0, 3)), "Yes", ("lem-2.1v",)),
    ClassifierCase("slender T", lambda: cl.is_slender(cl.CompactlyGeneratedLCA(0, 0, cl.CompactPart(cl.CompactKind.TORUS, 1))), "No", ("lem-2.9",)),
    ClassifierCase("slender R^2", lambda: cl.is_slender(cl.CompactlyGeneratedLCA(2, 0)), "No", ("lem-2.5",)),
]


def _trace_rules(out) -> set[str]:
    if isinstance(out, cl.ClassificationResult):
        return {r for r, _ in out.trace}
    if isinstance(out, tuple) and len(out) == 2 and isinstance(out[0], cl.Slender):
        return {r for r, _ in out[1]}
    return set()


def _summarize(out):
    if isinstance(out, cl.ClassificationResult):
        return (out.entropy_class.value, out.p_rank, out.slender.value)
    if isinstance(out, tuple) and len(out) == 2 and isinstance(out[0], cl.Slender):
        return out[0].value
    return out


def classifier_suite() -> SuiteReport:
    rep = SuiteReport("classifier")
    for case in CLASSIFIER_CASES:
        out = case.run()
        got = _summarize(out)
        rules = _trace_rules(out)
        row_ok = got == case.expected and set(case.rules) <= rules
        rep.passed &= row_ok
        rep.rows.append({"case": case.label, "expected": case.expected, "got": got, "rules": ",".join(sorted(rules)) or "-", "pass": row_ok})
    rep.summary = f"{sum(r['pass'] for r in rep.rows)}/{len(rep.rows)} cases"
    return rep


SUITES = {
    "oracle-vs-formula": oracle_vs_formula,
    "heisenberg": heisenberg_suite,
    "finite-groups": finite_groups_suite,
    "classifier": classifier_suite,
}
