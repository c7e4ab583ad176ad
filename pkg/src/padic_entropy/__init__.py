"""Exact topological entropy of endomorphisms of p-adic vector spaces and Heisenberg groups."""

from .classifier import (
    ClassificationResult,
    CompactlyGeneratedLCA,
    CompactPart,
    Heisenberg,
    PadicLCA,
    ProductOverPrimes,
    classify,
    is_slender,
    p_rank,
    parse_descriptor,
    pontryagin_dual,
)
from .entropy import EntropyValue
from .errors import *  # noqa: F401,F403
from .finite_groups import HeisenbergModGroup, frattini_and_rank, omega_series
from .heisenberg import (
    GradedEndo,
    HeisenbergElement,
    QpRing,
    ZmodRing,
    heisenberg_cotrajectory_oracle,
    heisenberg_entropy,
    validate_graded_endo,
)
from .lattice import PLattice, cotrajectory, cotrajectory_entropy, lattice_index, lattice_intersect, preimage_meet
from .matrix import PadicMatrix
from .newton import char_poly, entropy_sum_over_primes, newton_polygon, yuzvinski_entropy
from .scalars import PadicScalar, padic_norm, valuation

__version__ = "0.1.0"
