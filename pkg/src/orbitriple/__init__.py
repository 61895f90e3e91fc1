"""Orbifold spectral triples on flat tori.

Exact and floating-point tools for checking the spectral triple conditions
on G-invariant functions over T^p / G, with a scenario-driven verifier.
"""

from .clifford import CliffordElement, MultiVector, chirality, make_generators, symbol_map
from .funcalg import TrigPoly, differential, group_average, invariant_basis
from .hochschild import HochschildChain, boundary, is_cycle, quotient_torus_cycle, standard_torus_cycle
from .isometry import FiniteIsometryGroup, Isometry, generate_group, lift_table, singular_locus

__all__ = [
    "CliffordElement",
    "FiniteIsometryGroup",
    "HochschildChain",
    "Isometry",
    "MultiVector",
    "TrigPoly",
    "boundary",
    "chirality",
    "differential",
    "generate_group",
    "group_average",
    "invariant_basis",
    "is_cycle",
    "lift_table",
    "make_generators",
    "quotient_torus_cycle",
    "singular_locus",
    "standard_torus_cycle",
    "symbol_map",
]
__version__ = "0.1.0"
