"""Declarative group construction and the fixed witness families."""

from .build import Builder, build, make_frobenius, make_two_frobenius
from .families import FIVE_CYCLE_ORDER, FIVE_CYCLE_PRIMES, five_cycle_instance, qian_family
from .spec import (
    ALIASES,
    AutomorphismAction,
    Alternating,
    Cyclic,
    DirectProduct,
    ElementaryAbelian,
    FiveCycle,
    Frobenius,
    GroupSpec,
    MatrixAction,
    Permutations,
    Qian,
    Semidirect,
    Symmetric,
    TwoFrobenius,
    canonical_json,
    digest,
    from_dict,
    load,
    loads,
    resolve,
    to_dict,
)
