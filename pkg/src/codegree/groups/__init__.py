"""Finite group engine: realizations, enumeration, conjugacy and subgroups."""

from .group import DEFAULT_LIMIT, ConjugacyData, FiniteGroup, conjugacy_data, enumerate_elements, p_part, prime_factors
from .realization import AffineBlock, PermBlock, Realization
from .subgroups import (
    DEFAULT_HALL_RETRIES,
    FrobeniusStructure,
    QuotientGroup,
    Subgroup,
    classify_frobenius,
    closure,
    component_subgroup,
    derived_series,
    fitting_subgroup,
    fixed_point_witness,
    frobenius_structure,
    generated_subgroup,
    hall_pq,
    hall_subgroups,
    is_fixed_point_free,
    is_frobenius,
    is_normal,
    is_solvable,
    is_two_frobenius,
    p_core,
    sylow_subgroup,
    whole,
)
