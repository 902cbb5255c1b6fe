"""Shipped constructions and data: the Mathieu groups M11 and M12 on their
standard generators, derived point stabilizers, the two reference
certificates, and the maximal-subgroup tables used for bound propagation.

Data files live under the package's data/ directory; the GROUPRANK_DATA
environment variable overrides the location.
"""

from __future__ import annotations

import os
from functools import lru_cache
from pathlib import Path

from .bounds import GroupTable, load_table
from .genset import Certificate, load_certificates
from .permcore import PermGroup, parse_cycles

MATHIEU_GENERATORS = {
    11: ("(1,2,3,4,5,6,7,8,9,10,11)", "(3,7,11,8)(4,10,5,6)"),
    12: ("(1,2,3,4,5,6,7,8,9,10,11)", "(3,7,11,8)(4,10,5,6)",
         "(1,12)(2,11)(3,6)(4,8)(5,9)(7,10)"),
}

MATHIEU_ORDERS = {11: 7920, 12: 95040}

# dihedral subgroup orders 2k: the sets of k occurring in each group, also
# recomputable with search.dihedral_orders
SHIPPED_DIHEDRAL_ORDERS = {
    "M11": frozenset({2, 3, 4, 5, 6}),
    "M12": frozenset({2, 3, 4, 5, 6, 8, 10}),
}

_TABLE_FILES = ("m11.table", "m12.table", "auts6.table", "a6z2.table",
                "m10.table")
_CERT_FILES = ("m11-2a.cert", "m12-2b.cert")


def data_dir() -> Path:
    override = os.environ.get("GROUPRANK_DATA")
    if override:
        return Path(override)
    return Path(__file__).parent / "data"


@lru_cache(maxsize=None)
def mathieu(k: int) -> PermGroup:
    """M11 or M12 on the standard generators; order checked on construction."""
    if k not in MATHIEU_GENERATORS:
        raise ValueError(f"unsupported Mathieu index {k} (supported: 11, 12)")
    degree = 12 if k == 12 else 11
    gens = [parse_cycles(s, degree) for s in MATHIEU_GENERATORS[k]]
    g = PermGroup(gens, degree=degree, name=f"M{k}")
    if g.order() != MATHIEU_ORDERS[k]:
        raise RuntimeError(
            f"M{k} construction has order {g.order():,}, "
            f"expected {MATHIEU_ORDERS[k]:,}")
    return g


def stabilizer(g: PermGroup, point: int) -> PermGroup:
    """Stabilizer of a 1-based point; order is |g| / orbit size."""
    return g.stabilizer(point)


@lru_cache(maxsize=None)
def shipped_certificates() -> tuple[Certificate, ...]:
    certs = []
    for fname in _CERT_FILES:
        certs.extend(load_certificates(data_dir() / fname))
    return tuple(certs)


@lru_cache(maxsize=None)
def shipped_tables() -> tuple[GroupTable, ...]:
    return tuple(load_table(data_dir() / fname) for fname in _TABLE_FILES)


def shipped_table(group_name: str) -> GroupTable:
    for t in shipped_tables():
        if t.group_name == group_name:
            return t
    raise KeyError(f"no shipped table for {group_name!r}")


def group_by_name(name: str) -> PermGroup:
    """Look up a catalog group ("M11", "M12") or an oracle construct spec."""
    if name == "M11":
        return mathieu(11)
    if name == "M12":
        return mathieu(12)
    from .oracle import construct
    return construct(name)
