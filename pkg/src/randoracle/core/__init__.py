"""Exact arithmetic and combinatorial primitives."""
from fractions import Fraction as Rational

from .gf2n import IRREDUCIBLE, FieldElement, gf_add, gf_mul
from .perms import (
    Permutation,
    all_permutations,
    double_factorial,
    enumerate_fixed_point_free_involutions,
    enumerate_full_cycles,
    from_index,
    pair_fixing_count,
    permutation_apply,
    to_index,
)
from .sparse import SparseRationalMatrix

__all__ = [
    "Rational",
    "IRREDUCIBLE",
    "FieldElement",
    "gf_add",
    "gf_mul",
    "Permutation",
    "all_permutations",
    "double_factorial",
    "enumerate_fixed_point_free_involutions",
    "enumerate_full_cycles",
    "from_index",
    "pair_fixing_count",
    "permutation_apply",
    "to_index",
    "SparseRationalMatrix",
]
