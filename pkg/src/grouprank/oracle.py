"""Brute-force ground truth for small groups: exact maximal irredundant-set
and irredundant-generating-set sizes, subgroup lattices, and constructors for
standard test families.

Everything here works over an element index table and a multiplication
table, closed by breadth-first search; the main chain-based code paths are
deliberately not reused, so oracle answers are an independent check on them.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import _kernels as _k
from .permcore import Permutation, PermGroup, parse_cycles

BRUTE_ORDER_CAP = 400
LATTICE_ORDER_CAP = 200


class OracleCapError(RuntimeError):
    pass


def closure_elements(gens, degree: int, cap: int = 100_000):
    """All elements of <gens> by plain breadth-first multiplication closure.

    Independent of stabilizer chains; also serves as the oracle for chain
    orders in tests.
    """
    ident = tuple(range(degree))
    gen_tuples = [tuple(int(v) for v in g.images) for g in gens]
    seen = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for x in frontier:
            for g in gen_tuples:
                y = tuple(g[p] for p in x)
                if y not in seen:
                    if len(seen) >= cap:
                        raise OracleCapError(
                            f"closure exceeded cap {cap:,}")
                    seen.add(y)
                    new.append(y)
        frontier = new
    return sorted(seen)


class GroupIndex:
    """A small group flattened to index form: sorted element table, index
    multiplication, and cached subset closures."""

    def __init__(self, group: PermGroup, cap: int = BRUTE_ORDER_CAP):
        order = group.order()
        if order > cap:
            raise OracleCapError(
                f"group order {order:,} exceeds oracle cap {cap:,}")
        self.group = group
        self.degree = group.degree
        elems = closure_elements(group.generators, group.degree, cap=cap + 1)
        self.elements = np.array(elems, dtype=np.int64)
        self.order = len(elems)
        self.identity = _k.row_find(self.elements,
                                    np.arange(group.degree, dtype=np.int64))
        self.table = _k.mult_table(self.elements)
        self.elt_orders = _k.orders_batch(self.elements)
        self._closure_cache: dict[tuple[int, ...], tuple[int, bytes]] = {}

    def perm(self, idx: int) -> Permutation:
        return Permutation(self.elements[idx])

    def subgroup_of(self, indices) -> PermGroup:
        return PermGroup([self.perm(i) for i in indices] or [],
                         degree=self.degree)

    def closure(self, indices) -> tuple[int, bytes]:
        """(size, membership bitmap) of the subgroup generated by indices."""
        key = tuple(sorted(set(indices)))
        hit = self._closure_cache.get(key)
        if hit is not None:
            return hit
        member = np.zeros(self.order, np.bool_)
        size = _k.table_closure(self.table,
                                np.array(key or [self.identity], np.int64),
                                self.identity, member)
        out = (int(size), member.tobytes())
        self._closure_cache[key] = out
        return out

    def closure_size(self, indices) -> int:
        return self.closure(indices)[0]

    def member(self, bitmap: bytes, idx: int) -> bool:
        return bitmap[idx] != 0

    def cyclic_reps(self, pool=None):
        """One representative per cyclic subgroup generated from the pool
        (default: all nontrivial elements); irredundancy only depends on the
        cyclic subgroups of the members."""
        seen = set()
        reps = []
        pool = range(self.order) if pool is None else pool
        for i in pool:
            if i == self.identity:
                continue
            _, bm = self.closure([i])
            if bm not in seen:
                seen.add(bm)
                reps.append(i)
        return reps

    def conjugacy_class_indices(self) -> list[np.ndarray]:
        """Conjugation-orbit partition via index arithmetic."""
        inv = np.empty(self.order, np.int64)
        for i in range(self.order):
            row = np.where(self.table[i] == self.identity)[0]
            inv[i] = row[0]
        labels = np.full(self.order, -1, np.int64)
        ncls = 0
        gens_idx = [int(_k.row_find(self.elements,
                                    np.asarray(g.images, np.int64)))
                    for g in self.group.generators]
        for seed in range(self.order):
            if labels[seed] != -1:
                continue
            labels[seed] = ncls
            queue = [seed]
            while queue:
                x = queue.pop()
                for gi in gens_idx:
                    y = int(self.table[int(self.table[inv[gi], x]), gi])
                    if labels[y] == -1:
                        labels[y] = ncls
                        queue.append(y)
            ncls += 1
        return [np.nonzero(labels == c)[0] for c in range(ncls)]


@dataclass
class RankReport:
    descriptor: str
    order: int
    m: int
    m_witness: tuple[Permutation, ...]
    i: int
    i_witness: tuple[Permutation, ...]
    generating_sizes: frozenset[int]
    class_ranks: dict[str, tuple[int, int]] | None
    elapsed: float

    def machine_fields(self) -> dict[str, str]:
        out = {
            "group": self.descriptor,
            "order": str(self.order),
            "m": str(self.m),
            "i": str(self.i),
        }
        if self.class_ranks:
            for label, (mc, ic) in sorted(self.class_ranks.items()):
                out[f"m[{label}]"] = str(mc)
                out[f"i[{label}]"] = str(ic)
        return out


def _search_irredundant(gi: GroupIndex, pool):
    """Depth-first search over irredundant subsets of cyclic-subgroup
    representatives drawn from `pool`.

    Returns (i, i_witness, m, m_witness, generating_sizes).  A set extends by
    a new element outside the closure of the current set, and the extension
    is re-verified: no previous member may be absorbed.
    """
    reps = gi.cyclic_reps(pool)
    best_i = 0
    best_i_wit: tuple[int, ...] = ()
    best_m = 0
    best_m_wit: tuple[int, ...] = ()
    gen_sizes: set[int] = set()
    order = gi.order

    def visit(current: tuple[int, ...], start: int):
        nonlocal best_i, best_i_wit, best_m, best_m_wit
        size, bm = gi.closure(current) if current else (1, None)
        if len(current) > best_i:
            best_i = len(current)
            best_i_wit = current
        if current and size == order:
            gen_sizes.add(len(current))
            if len(current) > best_m:
                best_m = len(current)
                best_m_wit = current
        for pos in range(start, len(reps)):
            e = reps[pos]
            if bm is not None and gi.member(bm, e):
                continue
            cand = current + (e,)
            full = gi.closure_size(cand)
            ok = True
            for j in range(len(current)):
                rest = cand[:j] + cand[j + 1:]
                if gi.closure_size(rest) == full:
                    ok = False
                    break
            if ok:
                visit(cand, pos + 1)

    visit((), 0)
    return best_i, best_i_wit, best_m, best_m_wit, frozenset(gen_sizes)


def brute_m(g: PermGroup, cap: int = BRUTE_ORDER_CAP):
    """Exact maximal size of an irredundant generating sequence, with a
    witness."""
    gi = GroupIndex(g, cap)
    _, _, m, wit, _ = _search_irredundant(gi, None)
    return m, tuple(gi.perm(i) for i in wit)


def brute_i(g: PermGroup, cap: int = BRUTE_ORDER_CAP):
    """Exact maximal size of an irredundant sequence (any subgroup), with a
    witness."""
    gi = GroupIndex(g, cap)
    i, wit, _, _, _ = _search_irredundant(gi, None)
    return i, tuple(gi.perm(x) for x in wit)


def brute_class_ranks(g: PermGroup, class_elements,
                      cap: int = BRUTE_ORDER_CAP):
    """Exact (m, i) with all elements restricted to the given conjugacy
    class, plus witnesses.  The identity class yields (0, 0)."""
    gi = GroupIndex(g, cap)
    pool = []
    for p in class_elements:
        idx = _k.row_find(gi.elements, np.asarray(p.images, np.int64))
        if idx < 0:
            raise ValueError("class element outside the group")
        pool.append(int(idx))
    i, iw, m, mw, _ = _search_irredundant(gi, pool)
    return ((m, tuple(gi.perm(x) for x in mw)),
            (i, tuple(gi.perm(x) for x in iw)))


def rank_report(g: PermGroup, descriptor: str = "",
                with_classes: bool = False,
                cap: int = BRUTE_ORDER_CAP) -> RankReport:
    t0 = time.perf_counter()
    gi = GroupIndex(g, cap)
    i, iw, m, mw, sizes = _search_irredundant(gi, None)
    class_ranks = None
    if with_classes:
        class_ranks = {}
        classes = g.conjugacy_classes()
        for cls in classes:
            if cls.element_order == 1:
                class_ranks[cls.label] = (0, 0)
                continue
            (mc, _), (ic, _) = brute_class_ranks(g, cls.elements(), cap)
            class_ranks[cls.label] = (mc, ic)
    return RankReport(
        descriptor=descriptor or (g.name or f"group of order {gi.order}"),
        order=gi.order,
        m=m,
        m_witness=tuple(gi.perm(x) for x in mw),
        i=i,
        i_witness=tuple(gi.perm(x) for x in iw),
        generating_sizes=sizes,
        class_ranks=class_ranks,
        elapsed=time.perf_counter() - t0,
    )


def subgroup_lattice(g: PermGroup, cap: int = LATTICE_ORDER_CAP):
    """All subgroups (up to equality) with maximality flags.

    Built by closing the cyclic subgroups under pairwise joins until a fixed
    point.  Returns a list of (PermGroup, is_maximal) pairs sorted by order.
    """
    gi = GroupIndex(g, cap)
    bitmaps: dict[bytes, tuple[int, tuple[int, ...]]] = {}

    trivial = np.zeros(gi.order, np.bool_)
    trivial[gi.identity] = True
    bitmaps[trivial.tobytes()] = (1, ())

    for rep in gi.cyclic_reps():
        size, bm = gi.closure([rep])
        bitmaps.setdefault(bm, (size, (rep,)))

    while True:
        added = False
        items = list(bitmaps.items())
        for a in range(len(items)):
            for b in range(a + 1, len(items)):
                gens = tuple(sorted(set(items[a][1][1] + items[b][1][1])))
                if not gens:
                    continue
                size, bm = gi.closure(gens)
                if bm not in bitmaps:
                    bitmaps[bm] = (size, gens)
                    added = True
        if not added:
            break

    entries = sorted(bitmaps.items(), key=lambda kv: (kv[1][0], kv[0]))
    masks = [np.frombuffer(bm, np.bool_) for bm, _ in entries]
    sizes = [size for _, (size, _) in entries]
    out = []
    for idx, (bm, (size, gens)) in enumerate(entries):
        if size == gi.order:
            maximal = False
        else:
            maximal = True
            for jdx in range(len(entries)):
                if sizes[jdx] <= size or sizes[jdx] == gi.order:
                    continue
                if not np.any(masks[idx] & ~masks[jdx]):
                    maximal = False
                    break
        members = np.nonzero(masks[idx])[0]
        out.append((gi.subgroup_of(_reduce_generators(gi, members)), maximal))
    return out


def _reduce_generators(gi: GroupIndex, members) -> list[int]:
    """A short generating list for a closed member set, by greedy growth."""
    gens: list[int] = []
    bm = None
    target = len(members)
    for i in members:
        i = int(i)
        if i == gi.identity:
            continue
        if bm is not None and gi.member(bm, i):
            continue
        gens.append(i)
        size, bm = gi.closure(gens)
        if size == target:
            break
    return gens


# ---------------------------------------------------------------------------
# constructors


def construct(spec: str) -> PermGroup:
    """Build a named permutation group.

    Grammar: cyclic(n) | symmetric(n) | alternating(n) | dihedral(2n)
           | product(spec, spec); product acts on the disjoint union of the
    factors' points.
    """
    spec = spec.strip()
    group = _parse_construct(spec)
    return group


def _parse_construct(spec: str) -> PermGroup:
    spec = spec.strip()
    if "(" not in spec or not spec.endswith(")"):
        raise ValueError(f"bad group spec {spec!r}")
    head, _, rest = spec.partition("(")
    body = rest[:-1]
    head = head.strip()
    if head == "product":
        depth = 0
        split = -1
        for pos, ch in enumerate(body):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                split = pos
                break
        if split < 0:
            raise ValueError(f"product needs two factors in {spec!r}")
        a = _parse_construct(body[:split])
        b = _parse_construct(body[split + 1:])
        return _product(a, b, name=spec)
    try:
        n = int(body)
    except ValueError:
        raise ValueError(f"bad argument in group spec {spec!r}") from None
    if head == "cyclic":
        if n < 1:
            raise ValueError("cyclic(n) needs n >= 1")
        if n == 1:
            return PermGroup([], degree=1, name=spec)
        return PermGroup([_cycle(n)], degree=n, name=spec)
    if head == "symmetric":
        if n < 1:
            raise ValueError("symmetric(n) needs n >= 1")
        if n == 1:
            return PermGroup([], degree=1, name=spec)
        gens = [parse_cycles("(1,2)", n)]
        if n > 2:
            gens.append(_cycle(n))
        return PermGroup(gens, degree=n, name=spec)
    if head == "alternating":
        if n < 3:
            raise ValueError("alternating(n) needs n >= 3")
        gens = [parse_cycles("(1,2,3)", n)]
        if n > 3:
            if n % 2 == 1:
                gens.append(_cycle(n))
            else:
                gens.append(Permutation(
                    [0] + [(p % (n - 1)) + 1 for p in range(1, n)]))
        return PermGroup(gens, degree=n, name=spec)
    if head == "dihedral":
        if n < 4 or n % 2:
            raise ValueError("dihedral(2n) needs an even order >= 4")
        half = n // 2
        if half == 2:
            return PermGroup([parse_cycles("(1,2)", 4),
                              parse_cycles("(3,4)", 4)],
                             degree=4, name=spec)
        rot = _cycle(half)
        refl = Permutation([0] + list(range(half - 1, 0, -1)))
        return PermGroup([rot, refl], degree=half, name=spec)
    raise ValueError(f"unknown group kind {head!r}")


def _cycle(n: int) -> Permutation:
    return Permutation([(i + 1) % n for i in range(n)])


def _product(a: PermGroup, b: PermGroup, name: str) -> PermGroup:
    da, db = a.degree, b.degree
    gens = []
    for g in a.generators:
        gens.append(Permutation(list(g.images) + list(range(da, da + db))))
    for g in b.generators:
        gens.append(Permutation(list(range(da)) + [da + x for x in g.images]))
    return PermGroup(gens, degree=da + db, name=name)
