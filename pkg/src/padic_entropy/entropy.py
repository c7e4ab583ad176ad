"""Formal entropy values: nonnegative rational combinations of log p, or +inf."""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Mapping

from .scalars import check_prime

DISPLAY_DIGITS = 20


@dataclass(frozen=True)
class EntropyValue:
    """The value sum_p coeff_p * log p, or +infinity when ``infinite`` is set.

    Equality is exact: zero coefficients are dropped at construction so two
    values compare equal iff they denote the same formal sum.
    """

    terms: Mapping[int, Fraction] = field(default_factory=dict)
    infinite: bool = False

    def __post_init__(self):
        clean = {}
        for p, q in self.terms.items():
            check_prime(p)
            q = Fraction(q)
            if q < 0:
                raise ValueError(f"negative entropy coefficient {q} at p={p}")
            if q:
                clean[p] = q
        if self.infinite:
            clean = {}
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def zero(cls) -> EntropyValue:
        return cls()

    @classmethod
    def log(cls, p: int, coeff=1) -> EntropyValue:
        return cls({p: Fraction(coeff)})

    @classmethod
    def inf(cls) -> EntropyValue:
        return cls(infinite=True)

    def is_zero(self) -> bool:
        return not self.infinite and not self.terms

    def coeff(self, p: int) -> Fraction:
        return self.terms.get(p, Fraction(0))

    def __add__(self, other: EntropyValue) -> EntropyValue:
        if not isinstance(other, EntropyValue):
            return NotImplemented
        if self.infinite or other.infinite:
            return EntropyValue.inf()
        merged = dict(self.terms)
        for p, q in other.terms.items():
            merged[p] = merged.get(p, Fraction(0)) + q
        return EntropyValue(merged)

    def __radd__(self, other):
        if other == 0:
            return self
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, EntropyValue):
            return NotImplemented
        return self.infinite == other.infinite and self.terms == other.terms

    def __hash__(self):
        return hash((self.infinite, tuple(self.terms.items())))

    def decimal(self, digits: int = DISPLAY_DIGITS) -> str:
        """Display-only decimal rendering to ``digits`` significant figures."""
        if self.infinite:
            return "inf"
        if not self.terms:
            return "0"
        with localcontext() as ctx:
            ctx.prec = digits + 25
            total = sum(
                Decimal(q.numerator) / Decimal(q.denominator) * Decimal(p).ln()
                for p, q in self.terms.items()
            )
            ctx.prec = digits
            total = +total
        return format(total, f".{digits}g")

    def to_json(self) -> dict:
        return {
            "terms": [{"p": p, "coeff": str(q)} for p, q in self.terms.items()],
            "infinite": self.infinite,
            "decimal": self.decimal(),
        }

    @classmethod
    def from_json(cls, data: dict) -> EntropyValue:
        return cls({int(t["p"]): Fraction(t["coeff"]) for t in data["terms"]}, bool(data["infinite"]))

    def __str__(self):
        if self.infinite:
            return "+inf"
        if not self.terms:
            return "0"
        parts = []
        for p, q in self.terms.items():
            parts.append(f"log {p}" if q == 1 else f"{q}*log {p}")
        return " + ".join(parts)
