"""Rule-based entropy-class classification of structured group descriptors.

Every rule that fires appends a ``(rule_id, citation)`` pair to the trace;
citations come from the fixed whitelist :data:`CITATIONS`.  The engine
never extrapolates: descriptors outside the rule set come back Unknown.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

from .errors import MalformedDescriptor, NotApplicableError, NotPrime
from .scalars import check_prime


class EntropyClass(str, Enum):
    E0 = "E0"
    FINITE_NOT_E0 = "FiniteNotE0"
    FINITE = "Finite"
    NOT_FINITE = "NotFinite"
    UNKNOWN = "Unknown"


class Slender(str, Enum):
    YES = "Yes"
    NO = "No"
    NOT_APPLICABLE = "NotApplicable"
    UNKNOWN = "Unknown"


NOT_APPLICABLE = "NotApplicable"

CITATIONS = {
    "cor-3.2": "Corollary 3.2: invariant local basis gives entropy 0; hence Z_p^n in E_0",
    "thm-3.5": "Theorem 3.5 (Yuzvinski): h_top = sum_{|lambda_i|_p>1} log|lambda_i|_p; Q_p^n in E_<inf",
    "thm-3.6": "Theorem 3.6: Z_p^a x Q_p^b x Z(p^inf)^c x E_p in E_<inf, rank_p = a+b+c+d, E_0 iff b = 0",
    "thm-3.6-dual": "Theorem 3.6 duality display: dual swaps the Z_p and Z(p^inf) exponents; rank_p preserved",
    "thm-3.7-i": "Theorem 3.7(i): G in E_<inf forces finite dimension",
    "thm-3.7-iv": "Theorem 3.7(iv): a periodic G is in E_0 iff all its p-Sylow subgroups are",
    "thm-3.8": "Theorem 3.8: h_top(phi) = sum_p h_top(phi restricted to G_p)",
    "thm-1.2a": "Theorem 1.2(a): if G is slender then G in E_0; conversely E_0 and K = 0 give slender",
    "thm-1.2b": "Theorem 1.2(b): for connected K, G in E_<inf iff G = R^d + Z^m + T^s",
    "thm-1.4": "Theorem 1.4: H_n(Q_p) has rank_p = 2n and lies in E_<inf but not in E_0",
    "lem-4.3": "Lemma 4.3: H_n(Q_p) is a nonabelian p-group of class two with rank_p = 2n",
    "lem-2.1v": "Lemma 2.1(v): direct products of slender groups are slender; Z^(N) is slender",
    "lem-2.5": "Lemma 2.5 (Sasiada): a slender group must be reduced (R contains Q)",
    "lem-2.9": "Lemma 2.9: there are no nontrivial compact abelian slender groups",
    "hofmor-7.58": "Connected finite-dimensional compact abelian groups are tori T^s",
    "slender-mismatch": "Slenderness is a discrete notion; topologized p-adic and nonabelian descriptors are not covered",
}


# -- descriptors ---------------------------------------------------------------

class CompactKind(str, Enum):
    ZERO = "Zero"
    TORUS = "Torus"
    CONNECTED_FINITE_DIM = "ConnectedFiniteDim"
    CONNECTED_INFINITE_DIM = "ConnectedInfiniteDim"
    PROFINITE_FROM_P_PARTS = "ProfiniteFromPParts"
    UNSPECIFIED = "Unspecified"


@dataclass(frozen=True)
class CompactPart:
    kind: CompactKind
    s: int = 0
    parts: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", CompactKind(self.kind))
        if self.s < 0:
            raise MalformedDescriptor("compact part dimension must be nonnegative")
        if self.s and self.kind not in (CompactKind.TORUS, CompactKind.CONNECTED_FINITE_DIM):
            raise MalformedDescriptor(f"{self.kind.value} takes no dimension")
        if self.parts and self.kind is not CompactKind.PROFINITE_FROM_P_PARTS:
            raise MalformedDescriptor(f"{self.kind.value} takes no parts")

    def is_trivial(self) -> bool:
        if self.kind is CompactKind.ZERO:
            return True
        if self.kind in (CompactKind.TORUS, CompactKind.CONNECTED_FINITE_DIM):
            return self.s == 0
        if self.kind is CompactKind.PROFINITE_FROM_P_PARTS:
            return not self.parts
        return False

    def is_torus(self) -> bool:
        return self.kind in (CompactKind.ZERO, CompactKind.TORUS, CompactKind.CONNECTED_FINITE_DIM)


@dataclass(frozen=True)
class CompactlyGeneratedLCA:
    """R^d + Z^m + K."""

    d: int
    m: int
    K: CompactPart = CompactPart(CompactKind.ZERO)


@dataclass(frozen=True)
class PadicLCA:
    """Z_p^alpha x Q_p^beta x Z(p^inf)^gamma x E_p with rank_p(E_p) = delta."""

    p: int
    alpha: int = 0
    beta: int = 0
    gamma: int = 0
    delta: int = 0


@dataclass(frozen=True)
class Heisenberg:
    p: int
    n: int


@dataclass(frozen=True)
class ProductOverPrimes:
    parts: tuple[PadicLCA, ...]


GroupDescriptor = Union[CompactlyGeneratedLCA, PadicLCA, Heisenberg, ProductOverPrimes]


def _nonneg_int(data: dict, key: str, default=None) -> int:
    if key not in data:
        if default is None:
            raise MalformedDescriptor(f"missing field {key!r}")
        return default
    v = data[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < 0:
        raise MalformedDescriptor(f"field {key!r} must be a nonnegative integer, got {v!r}")
    return v


def _prime(data: dict) -> int:
    p = _nonneg_int(data, "p")
    try:
        return check_prime(p)
    except NotPrime as exc:
        raise MalformedDescriptor(str(exc)) from exc


def _only(data: dict, allowed: set) -> None:
    extra = set(data) - allowed
    if extra:
        raise MalformedDescriptor(f"unknown fields {sorted(extra)}")


def parse_descriptor(data) -> GroupDescriptor:
    """Parse a descriptor from JSON text or a dict with a "kind" discriminator."""
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, dict) or "kind" not in data:
        raise MalformedDescriptor("descriptor must be an object with a 'kind' field")
    kind = data["kind"]
    if kind == "PadicLCA":
        _only(data, {"kind", "p", "alpha", "beta", "gamma", "delta"})
        return PadicLCA(
            _prime(data),
            _nonneg_int(data, "alpha", 0),
            _nonneg_int(data, "beta", 0),
            _nonneg_int(data, "gamma", 0),
            _nonneg_int(data, "delta", 0),
        )
    if kind == "Heisenberg":
        _only(data, {"kind", "p", "n"})
        n = _nonneg_int(data, "n")
        if n < 1:
            raise MalformedDescriptor("Heisenberg n must be positive")
        return Heisenberg(_prime(data), n)
    if kind == "ProductOverPrimes":
        _only(data, {"kind", "parts"})
        parts = data.get("parts")
        if not isinstance(parts, list):
            raise MalformedDescriptor("ProductOverPrimes needs a list of parts")
        parsed = tuple(parse_descriptor(p) for p in parts)
        return _check_product(parsed)
    if kind == "CompactlyGeneratedLCA":
        _only(data, {"kind", "d", "m", "K"})
        return CompactlyGeneratedLCA(_nonneg_int(data, "d"), _nonneg_int(data, "m"), _parse_compact(data.get("K", {"kind": "Zero"})))
    raise MalformedDescriptor(f"unknown descriptor kind {kind!r}")


def _check_product(parts: tuple) -> ProductOverPrimes:
    if any(not isinstance(p, PadicLCA) for p in parts):
        raise MalformedDescriptor("ProductOverPrimes parts must be PadicLCA descriptors")
    primes = [p.p for p in parts]
    if len(set(primes)) != len(primes):
        raise MalformedDescriptor(f"duplicate primes in product: {primes}")
    return ProductOverPrimes(parts)


def _parse_compact(data) -> CompactPart:
    if isinstance(data, str):
        data = {"kind": data}
    if not isinstance(data, dict) or "kind" not in data:
        raise MalformedDescriptor("compact part must be an object with a 'kind' field")
    try:
        kind = CompactKind(data["kind"])
    except ValueError as exc:
        raise MalformedDescriptor(f"unknown compact part {data['kind']!r}") from exc
    if kind in (CompactKind.TORUS, CompactKind.CONNECTED_FINITE_DIM):
        _only(data, {"kind", "s"})
        return CompactPart(kind, s=_nonneg_int(data, "s"))
    if kind is CompactKind.PROFINITE_FROM_P_PARTS:
        _only(data, {"kind", "parts"})
        parts = data.get("parts", [])
        if not isinstance(parts, list):
            raise MalformedDescriptor("ProfiniteFromPParts needs a list of parts")
        return CompactPart(kind, parts=_check_product(tuple(parse_descriptor(p) for p in parts)).parts)
    _only(data, {"kind"})
    return CompactPart(kind)


def descriptor_to_json(g: GroupDescriptor) -> dict:
    if isinstance(g, PadicLCA):
        return {"kind": "PadicLCA", "p": g.p, "alpha": g.alpha, "beta": g.beta, "gamma": g.gamma, "delta": g.delta}
    if isinstance(g, Heisenberg):
        return {"kind": "Heisenberg", "p": g.p, "n": g.n}
    if isinstance(g, ProductOverPrimes):
        return {"kind": "ProductOverPrimes", "parts": [descriptor_to_json(x) for x in g.parts]}
    k = g.K
    kd: dict = {"kind": k.kind.value}
    if k.kind in (CompactKind.TORUS, CompactKind.CONNECTED_FINITE_DIM):
        kd["s"] = k.s
    if k.kind is CompactKind.PROFINITE_FROM_P_PARTS:
        kd["parts"] = [descriptor_to_json(x) for x in k.parts]
    return {"kind": "CompactlyGeneratedLCA", "d": g.d, "m": g.m, "K": kd}


def validate_descriptor(g) -> None:
    if isinstance(g, PadicLCA):
        try:
            check_prime(g.p)
        except NotPrime as exc:
            raise MalformedDescriptor(str(exc)) from exc
        if min(g.alpha, g.beta, g.gamma, g.delta) < 0:
            raise MalformedDescriptor("negative exponent")
    elif isinstance(g, Heisenberg):
        try:
            check_prime(g.p)
        except NotPrime as exc:
            raise MalformedDescriptor(str(exc)) from exc
        if g.n < 1:
            raise MalformedDescriptor("Heisenberg n must be positive")
    elif isinstance(g, ProductOverPrimes):
        for part in g.parts:
            validate_descriptor(part)
        _check_product(g.parts)
    elif isinstance(g, CompactlyGeneratedLCA):
        if g.d < 0 or g.m < 0 or g.K.s < 0:
            raise MalformedDescriptor("negative rank")
    else:
        raise MalformedDescriptor(f"not a group descriptor: {g!r}")


# -- rules -------------------------------------------------------------------

Trace = list[tuple[str, str]]


@dataclass
class ClassificationResult:
    entropy_class: EntropyClass
    p_rank: Union[int, str] = NOT_APPLICABLE
    slender: Slender = Slender.NOT_APPLICABLE
    trace: Trace = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "entropy_class": self.entropy_class.value,
            "p_rank": self.p_rank,
            "slender": self.slender.value,
            "trace": [{"rule": r, "citation": c} for r, c in self.trace],
        }


def _cite(trace: Trace, rule: str) -> None:
    entry = (rule, CITATIONS[rule])
    if entry not in trace:
        trace.append(entry)


def p_rank(g: GroupDescriptor) -> int:
    """alpha + beta + gamma + delta for PadicLCA, 2n for Heisenberg."""
    validate_descriptor(g)
    if isinstance(g, PadicLCA):
        return g.alpha + g.beta + g.gamma + g.delta
    if isinstance(g, Heisenberg):
        return 2 * g.n
    raise NotApplicableError(f"p-rank is not defined for {type(g).__name__}")


def pontryagin_dual(g: PadicLCA) -> PadicLCA:
    """Swap the Z_p and Z(p^inf) exponents; Q_p and the finite part are self-dual."""
    if not isinstance(g, PadicLCA):
        raise MalformedDescriptor("dual is only defined for PadicLCA descriptors")
    validate_descriptor(g)
    return PadicLCA(g.p, alpha=g.gamma, beta=g.beta, gamma=g.alpha, delta=g.delta)


def is_slender(g: GroupDescriptor) -> tuple[Slender, Trace]:
    validate_descriptor(g)
    trace: Trace = []
    if not isinstance(g, CompactlyGeneratedLCA):
        _cite(trace, "slender-mismatch")
        return Slender.NOT_APPLICABLE, trace
    if g.d > 0:
        _cite(trace, "lem-2.5")
        return Slender.NO, trace
    if not g.K.is_trivial():
        if g.K.kind is CompactKind.UNSPECIFIED:
            return Slender.UNKNOWN, trace
        _cite(trace, "lem-2.9")
        return Slender.NO, trace
    _cite(trace, "lem-2.1v")
    return Slender.YES, trace


def _classify_padic(g: PadicLCA, trace: Trace) -> EntropyClass:
    _cite(trace, "thm-3.6")
    if g.beta > 0:
        _cite(trace, "thm-3.5")
        return EntropyClass.FINITE_NOT_E0
    _cite(trace, "cor-3.2")
    return EntropyClass.E0


def classify(g: GroupDescriptor) -> ClassificationResult:
    validate_descriptor(g)
    trace: Trace = []
    if isinstance(g, PadicLCA):
        cls = _classify_padic(g, trace)
        return ClassificationResult(cls, p_rank(g), Slender.NOT_APPLICABLE, trace)

    if isinstance(g, Heisenberg):
        _cite(trace, "thm-1.4")
        _cite(trace, "lem-4.3")
        return ClassificationResult(EntropyClass.FINITE_NOT_E0, p_rank(g), Slender.NOT_APPLICABLE, trace)

    if isinstance(g, ProductOverPrimes):
        classes = [_classify_padic(part, trace) for part in g.parts]
        _cite(trace, "thm-3.8")
        _cite(trace, "thm-3.7-iv")
        cls = EntropyClass.E0 if all(c is EntropyClass.E0 for c in classes) else EntropyClass.FINITE_NOT_E0
        return ClassificationResult(cls, NOT_APPLICABLE, Slender.NOT_APPLICABLE, trace)

    slender, strace = is_slender(g)
    trace.extend(strace)
    if slender is Slender.YES:
        _cite(trace, "thm-1.2a")
        return ClassificationResult(EntropyClass.E0, NOT_APPLICABLE, slender, trace)
    kind = g.K.kind
    if g.K.is_torus():
        if kind is CompactKind.CONNECTED_FINITE_DIM:
            _cite(trace, "hofmor-7.58")
        _cite(trace, "thm-1.2b")
        return ClassificationResult(EntropyClass.FINITE, NOT_APPLICABLE, slender, trace)
    if kind is CompactKind.CONNECTED_INFINITE_DIM:
        _cite(trace, "thm-3.7-i")
        return ClassificationResult(EntropyClass.NOT_FINITE, NOT_APPLICABLE, slender, trace)
    return ClassificationResult(EntropyClass.UNKNOWN, NOT_APPLICABLE, slender, trace)
