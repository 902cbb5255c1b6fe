"""Upper-bound machinery: general position, family radicals, MaxDim, the
replacement property, and rank-bound propagation over maximal-subgroup
tables.

Two facts drive the propagation: the largest irredundant set of a group is
either realized inside the group itself or inside a maximal subgroup, and an
irredundant generating set of size k forces k distinct maximal subgroups
whose irredundant-set rank is at least k-1.  Tables of maximal-subgroup data
are shipped as input files and are never recomputed here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import _kernels as _k
from .genset import GeneratingSequence
from .permcore import DEFAULT_ENUM_CAP, Permutation, PermGroup

GENERAL_POSITION_MAX_FAMILY = 20
MAX_DIM_ORDER_CAP = 2000


# ---------------------------------------------------------------------------
# subgroup families


@dataclass(frozen=True)
class SubgroupFamily:
    parent: PermGroup
    members: tuple[PermGroup, ...]

    def __post_init__(self):
        for i, m in enumerate(self.members):
            if m.degree != self.parent.degree:
                raise ValueError(f"member {i + 1} has the wrong degree")
            if m.order() >= self.parent.order():
                raise ValueError(f"member {i + 1} is not a proper subgroup")

    def __len__(self) -> int:
        return len(self.members)


def _subgroup_from_rows(degree: int, rows: np.ndarray) -> PermGroup:
    """Group generated by a closed set of element rows, with few generators."""
    gens: list[Permutation] = []
    cur = PermGroup(gens, degree=degree)
    target = rows.shape[0]
    for i in range(target):
        if cur.order() == target:
            break
        p = Permutation(rows[i])
        if p.is_identity() or cur.contains(p):
            continue
        gens.append(p)
        cur = PermGroup(list(gens), degree=degree)
    return cur


def intersection(a: PermGroup, b: PermGroup,
                 cap: int = DEFAULT_ENUM_CAP) -> PermGroup:
    """Intersection subgroup, by filtering the smaller group's elements
    through the larger's membership test."""
    if a.degree != b.degree:
        raise ValueError("intersection of groups of different degrees")
    small, large = (a, b) if a.order() <= b.order() else (b, a)
    mat = small.element_matrix(cap)
    member = np.empty(mat.shape[0], np.bool_)
    _k.sift_batch(large.chain.arrays, mat, member)
    return _subgroup_from_rows(a.degree, mat[member])


def rad(f: SubgroupFamily, cap: int = DEFAULT_ENUM_CAP) -> PermGroup:
    """Intersection of all family members, smallest member first."""
    if not f.members:
        raise ValueError("rad of an empty family")
    members = sorted(f.members, key=lambda m: m.order())
    acc = members[0]
    for m in members[1:]:
        if acc.is_trivial():
            break
        acc = intersection(acc, m, cap)
    return acc


def general_position(f: SubgroupFamily, cap: int = DEFAULT_ENUM_CAP) -> bool:
    """True when growing any index set strictly shrinks the intersection.

    Checks every covering pair I < I + {j}; chains of strict steps make all
    strict containments strict.  The empty set's intersection is the parent.
    """
    k = len(f.members)
    if k > GENERAL_POSITION_MAX_FAMILY:
        raise ValueError(
            f"family size {k} exceeds cap {GENERAL_POSITION_MAX_FAMILY}")
    if f.parent.order() > cap:
        raise ValueError(f"parent order {f.parent.order():,} exceeds cap")
    subs: dict[frozenset, PermGroup] = {frozenset(): f.parent}
    for size in range(1, k + 1):
        for idx in itertools.combinations(range(k), size):
            key = frozenset(idx)
            prev = frozenset(idx[:-1])
            subs[key] = intersection(subs[prev], f.members[idx[-1]], cap)
    for key, sub in subs.items():
        o = sub.order()
        for j in key:
            if subs[key - {j}].order() == o:
                return False
    return True


def _family_necessary(parent: PermGroup, members: list[PermGroup],
                      cap: int) -> bool:
    """Equivalent general-position test: each member must strictly cut the
    intersection of the others (with the parent for a single member)."""
    k = len(members)
    if k == 1:
        return members[0].order() < parent.order()
    # prefix[i] = intersection of members[0..i-1], suffix[i] = of members[i+1..]
    prefix = [parent]
    for m in members[:-1]:
        prefix.append(intersection(prefix[-1], m, cap))
    suffix = [parent]
    for m in reversed(members[1:]):
        suffix.append(intersection(suffix[-1], m, cap))
    suffix.reverse()
    full = intersection(prefix[-1], members[-1], cap).order()
    for i in range(k):
        others = intersection(prefix[i], suffix[i], cap)
        if others.order() == full:
            return False
    return True


def max_dim(parent: PermGroup, maximal_members,
            cap: int = DEFAULT_ENUM_CAP) -> int:
    """Size of the largest general-position family of maximal subgroups.

    `maximal_members` must be the complete list of maximal subgroups (the
    caller's contract; see oracle.subgroup_lattice).
    """
    if parent.order() > MAX_DIM_ORDER_CAP:
        raise ValueError(
            f"parent order {parent.order():,} exceeds cap {MAX_DIM_ORDER_CAP:,}")
    members = list(maximal_members)
    n = len(members)
    best = 0

    def extend(chosen: list[PermGroup], start: int):
        nonlocal best
        best = max(best, len(chosen))
        if len(chosen) + (n - start) <= best:
            return
        for j in range(start, n):
            cand = chosen + [members[j]]
            if _family_necessary(parent, cand, cap):
                extend(cand, j + 1)

    extend([], 0)
    return best


# ---------------------------------------------------------------------------
# replacement property


def replacement_property(seq: GeneratingSequence,
                         cap: int = DEFAULT_ENUM_CAP) -> bool:
    """True when every nontrivial group element can replace some member of
    the sequence with generation preserved."""
    parent = seq.parent
    order = parent.order()
    if order > cap:
        raise ValueError(f"parent order {order:,} exceeds cap {cap:,}")
    from .genset import is_generating, is_irredundant
    if not is_irredundant(seq) or not is_generating(seq):
        raise ValueError("sequence must be irredundant and generating")
    k = len(seq)
    deleted_arrays = [seq.deleted(i).chain.arrays for i in range(k)]
    elems = parent.element_matrix(cap)
    scratch = np.empty(parent.degree, np.int64)
    for r in range(elems.shape[0]):
        g = elems[r]
        if _k.is_identity(g):
            continue
        replaced = False
        for i in range(k):
            o = _k.ch_extend_order(deleted_arrays[i], g, scratch)
            if o < 0:
                raise RuntimeError("chain capacity overflow")
            if o == order:
                replaced = True
                break
        if not replaced:
            return False
    return True


def rad_characterization_check(seq: GeneratingSequence,
                               families,
                               cap: int = DEFAULT_ENUM_CAP) -> bool:
    """Consistency check of the replacement property against family radicals.

    Each family must be in general position, consist of maximal subgroups,
    and have its j-th member containing the j-th deleted subgroup of the
    sequence.  Returns False exactly when the sequence satisfies the
    replacement property yet some supplied family has a nontrivial radical.
    """
    from .search import is_maximal
    families = list(families)
    k = len(seq)
    deleted = [seq.deleted(i) for i in range(k)]
    for fi, fam in enumerate(families):
        if len(fam.members) != k:
            raise ValueError(
                f"family {fi + 1} has {len(fam.members)} members, expected {k}")
        if not general_position(fam, cap):
            raise ValueError(f"family {fi + 1} is not in general position")
        for j, member in enumerate(fam.members):
            if not is_maximal(seq.parent, member):
                raise ValueError(
                    f"family {fi + 1} member {j + 1} is not maximal")
            for g in deleted[j].generators:
                if not member.contains(g):
                    raise ValueError(
                        f"family {fi + 1} member {j + 1} does not contain "
                        f"deleted subgroup {j + 1}")
    rp = replacement_property(seq, cap)
    any_nontrivial = any(not rad(fam, cap).is_trivial() for fam in families)
    return not (rp and any_nontrivial)


def gen_pos_inequality_check(f: SubgroupFamily, i_oracle,
                             subsets=None,
                             cap: int = DEFAULT_ENUM_CAP) -> bool:
    """Check k <= i(H_I) + |I| over the given index subsets.

    `i_oracle` maps a subgroup to its irredundant-set rank (or None when
    unknown, which is an error).  Default subsets: the empty set and all
    singletons, i.e. the k <= i(H_l) + 1 form.
    """
    k = len(f.members)
    if subsets is None:
        subsets = [()] + [(j,) for j in range(k)]
    for idx in subsets:
        sub = f.parent
        for j in idx:
            sub = intersection(sub, f.members[j], cap)
        i_val = i_oracle(sub)
        if i_val is None:
            raise ValueError(f"no oracle i value for intersection of {idx}")
        if k > i_val + len(idx):
            return False
    return True


# ---------------------------------------------------------------------------
# maximal-subgroup tables and bound propagation


@dataclass(frozen=True)
class SubgroupClassRecord:
    name: str
    order: int
    count: int = 1
    count_listed: bool = True
    solvable: bool = False
    m: int | None = None
    i: int | None = None

    def validate(self, parent_order: int):
        if parent_order % self.order != 0:
            raise ValueError(
                f"row {self.name}: order {self.order} does not divide "
                f"{parent_order}")
        if self.count < 1:
            raise ValueError(f"row {self.name}: count must be positive")
        if self.m is not None and self.i is not None and self.m > self.i:
            raise ValueError(f"row {self.name}: m exceeds i")


@dataclass(frozen=True)
class GroupTable:
    group_name: str
    group_order: int
    records: tuple[SubgroupClassRecord, ...]

    def to_text(self) -> str:
        lines = [f"table {self.group_name} order {self.group_order}"]
        for r in self.records:
            count = str(r.count) if r.count_listed else "-"
            m = str(r.m) if r.m is not None else "-"
            lines.append(
                f"row {r.name} order={r.order} count={count} "
                f"solvable={'yes' if r.solvable else 'no'} m={m} i={r.i}")
        return "\n".join(lines) + "\n"


class TableFormatError(ValueError):
    pass


def parse_table(text: str) -> GroupTable:
    group_name = None
    group_order = None
    records = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if tokens[0] == "table":
            if len(tokens) != 4 or tokens[2] != "order":
                raise TableFormatError(
                    f"line {ln}: expected 'table <name> order <N>'")
            group_name = tokens[1]
            try:
                group_order = int(tokens[3])
            except ValueError:
                raise TableFormatError(f"line {ln}: bad order") from None
        elif tokens[0] == "row":
            if group_name is None:
                raise TableFormatError(f"line {ln}: row before table line")
            if len(tokens) < 2:
                raise TableFormatError(f"line {ln}: row needs a name")
            fields = {}
            for tok in tokens[2:]:
                if "=" not in tok:
                    raise TableFormatError(f"line {ln}: bad field {tok!r}")
                key, _, value = tok.partition("=")
                fields[key] = value
            for key in ("order", "solvable", "i"):
                if key not in fields:
                    raise TableFormatError(f"line {ln}: missing {key}=")
            try:
                order = int(fields["order"])
                i_val = int(fields["i"])
                count_raw = fields.get("count", "-")
                count_listed = count_raw != "-"
                count = int(count_raw) if count_listed else 1
                m_raw = fields.get("m", "-")
                m_val = int(m_raw) if m_raw != "-" else None
            except ValueError:
                raise TableFormatError(
                    f"line {ln}: bad numeric field") from None
            if fields["solvable"] not in ("yes", "no"):
                raise TableFormatError(
                    f"line {ln}: solvable must be yes or no")
            rec = SubgroupClassRecord(
                name=tokens[1], order=order, count=count,
                count_listed=count_listed,
                solvable=fields["solvable"] == "yes", m=m_val, i=i_val)
            rec.validate(group_order)
            records.append(rec)
        else:
            raise TableFormatError(f"line {ln}: unknown key {tokens[0]!r}")
    if group_name is None:
        raise TableFormatError("no table line found")
    if not records:
        raise TableFormatError("table has no rows")
    return GroupTable(group_name, group_order, tuple(records))


def load_table(path) -> GroupTable:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_table(fh.read())


@dataclass(frozen=True)
class BoundLedger:
    group_name: str
    group_order: int
    m_lower: int | None
    m_upper: int
    i_upper: int
    i_exact: int | None
    max_subgroup_i: int
    verdict: str
    trace: tuple[str, ...]

    def machine_fields(self) -> dict[str, str]:
        return {
            "group": self.group_name,
            "m_lower": str(self.m_lower) if self.m_lower is not None else "-",
            "m_upper": str(self.m_upper),
            "i_upper": str(self.i_upper),
            "i_exact": str(self.i_exact) if self.i_exact is not None else "-",
            "verdict": self.verdict,
        }


def propagate_bounds(t: GroupTable,
                     m_lower: int | None = None) -> BoundLedger:
    """Derive upper bounds on m and i for a group from its maximal-subgroup
    table, plus exact values and a flatness verdict when they follow."""
    for r in t.records:
        if r.i is None:
            raise ValueError(f"row {r.name} has no i value")
    max_i = max(r.i for r in t.records)
    trace = [f"max over maximal-subgroup classes of i: {max_i}"]

    bound_plus_one = max_i + 1
    trace.append(
        f"rule max-i-plus-one: m <= max i(M) + 1 = {bound_plus_one}")

    # counting rule: an irredundant generating set of size k needs k distinct
    # maximal subgroups with i >= k-1.  k is refuted only when every class
    # that could supply them has a listed count and the counts fall short.
    bound_count = bound_plus_one
    k = 1
    while k <= max_i + 2:
        rows = [r for r in t.records if r.i >= k - 1]
        if all(r.count_listed for r in rows) and sum(r.count for r in rows) < k:
            bound_count = k - 1
            listed = sum(r.count for r in rows)
            trace.append(
                f"rule distinct-maximal-count: only {listed} maximal "
                f"subgroups have i >= {k - 1}, so m <= {k - 1}")
            break
        k += 1
    else:
        trace.append("rule distinct-maximal-count: no refutation "
                     "(some class counts unlisted)")

    m_upper = min(bound_plus_one, bound_count)
    trace.append(f"m upper bound: {m_upper}")
    if m_lower is not None:
        trace.append(f"m lower bound (supplied): {m_lower}")
        if m_lower > m_upper:
            raise ValueError(
                f"supplied m lower bound {m_lower} exceeds derived upper "
                f"bound {m_upper}")

    i_upper = max(m_upper, max_i)
    trace.append(
        f"rule i-recursion: i = max(m, max i(M)) <= "
        f"max({m_upper}, {max_i}) = {i_upper}")

    m_exact = m_lower if m_lower is not None and m_lower == m_upper else None
    if m_exact is not None:
        i_exact = max(m_exact, max_i)
        trace.append(f"m = {m_exact}, so rule i-recursion gives i = {i_exact}")
    elif max_i >= m_upper:
        i_exact = max_i
        trace.append(
            f"max i(M) = {max_i} >= m upper bound, so rule i-recursion "
            f"gives i = {max_i} regardless of m")
    else:
        i_exact = None

    if m_exact is not None:
        verdict = flatness_verdict(t, m_exact)
        trace.append(f"rule flatness: max i(M) = {max_i} vs m = {m_exact} "
                     f"-> {verdict}")
    else:
        verdict = "unknown"
        trace.append("rule flatness: m not established, verdict unknown")

    return BoundLedger(
        group_name=t.group_name,
        group_order=t.group_order,
        m_lower=m_lower,
        m_upper=m_upper,
        i_upper=i_upper,
        i_exact=i_exact,
        max_subgroup_i=max_i,
        verdict=verdict,
        trace=tuple(trace),
    )


def flatness_verdict(t: GroupTable, m_value: int) -> str:
    """Flatness from maximal-subgroup i values against an established m."""
    max_i = max(r.i for r in t.records)
    if max_i < m_value:
        return "strongly-flat"
    if max_i == m_value:
        return "flat"
    return "undetermined"
