"""Exact densities on eventually periodic subsets of N.

The core type is :class:`APSet`.  :func:`construct` builds nested sets
whose upper density approaches any rational target between two given
sets, and :mod:`densityforge.harness` checks density axioms exactly.
"""

from .apset import (
    EMPTY,
    NAT,
    APSet,
    ResourceCapError,
    affine,
    ap,
    complement,
    difference,
    intersect,
    is_subset,
    limits,
    residue_family,
    translate,
    union,
)
from .darboux import (
    DarbouxRequest,
    DarbouxTrace,
    PreconditionError,
    construct,
    dual_construct,
    exhaustive_split,
    member_at_depth,
    refine,
    split_residues,
)
from .density import (
    CANONICAL,
    LOWER_CANONICAL,
    DensityFunctional,
    canonical_value,
    estimate_banach,
    estimate_upper_asymptotic,
    lower_conjugate,
)
from .dsl import DSLSyntaxError, format_apset, parse_apset, parse_set_expr

__version__ = "0.1.0"

__all__ = [
    "EMPTY",
    "NAT",
    "APSet",
    "ResourceCapError",
    "affine",
    "ap",
    "complement",
    "difference",
    "intersect",
    "is_subset",
    "limits",
    "residue_family",
    "translate",
    "union",
    "DarbouxRequest",
    "DarbouxTrace",
    "PreconditionError",
    "construct",
    "dual_construct",
    "exhaustive_split",
    "member_at_depth",
    "refine",
    "split_residues",
    "CANONICAL",
    "LOWER_CANONICAL",
    "DensityFunctional",
    "canonical_value",
    "estimate_banach",
    "estimate_upper_asymptotic",
    "lower_conjugate",
    "DSLSyntaxError",
    "format_apset",
    "parse_apset",
    "parse_set_expr",
]
