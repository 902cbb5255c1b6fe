"""Irredundant generating sets of permutation groups: certificates, search,
and maximal-subgroup bounds."""

from .bounds import propagate_bounds
from .catalog import mathieu, shipped_certificates, shipped_tables
from .genset import (
    Certificate,
    GeneratingSequence,
    is_generating,
    is_irredundant,
    verify_certificate,
)
from .oracle import brute_i, brute_m, construct
from .permcore import (
    ConjugacyClass,
    PermGroup,
    Permutation,
    StabilizerChain,
    compose,
    element_order,
    format_cycles,
    identity,
    parse_cycles,
)
from .search import SearchConfig, dihedral_orders, scan

__all__ = [
    "Certificate",
    "ConjugacyClass",
    "GeneratingSequence",
    "PermGroup",
    "Permutation",
    "SearchConfig",
    "StabilizerChain",
    "brute_i",
    "brute_m",
    "compose",
    "construct",
    "dihedral_orders",
    "element_order",
    "format_cycles",
    "identity",
    "is_generating",
    "is_irredundant",
    "mathieu",
    "parse_cycles",
    "propagate_bounds",
    "scan",
    "shipped_certificates",
    "shipped_tables",
    "verify_certificate",
]
