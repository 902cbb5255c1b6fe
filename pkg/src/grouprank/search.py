"""Lower-bound discovery: lexicographic scans over involution pools with
dihedral-order tails, tail splitting into involution pairs, and
maximality-based pruning.

The scan enumerates (target-2)-subsets of an involution pool, appends a tail
whose order occurs among the group's dihedral subgroup orders, keeps the
candidates that are irredundant and generating, and then tries to replace the
tail by a pair of involutions multiplying to it.  Every emitted certificate
has the target size and verifies independently.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from random import Random

import numpy as np

from . import _kernels as _k
from .genset import (
    CLAIM_IRREDUNDANT_GENERATING,
    Certificate,
    GeneratingSequence,
    is_irredundant,
)
from .permcore import DEFAULT_ENUM_CAP, Permutation, PermGroup

_CHAIN_CAP = 64
_HIT_BUFFER = 4096


class CombinationCursor:
    """Lexicographic n-subsets of {1..m}, starting at (1, ..., n).

    `counter` counts tuples exposed so far (the starting tuple included);
    iteration visits exactly C(m, n) tuples.
    """

    def __init__(self, m: int, n: int):
        if n < 0 or m < 0 or n > m:
            raise ValueError(f"need 0 <= n <= m, got m={m}, n={n}")
        self.m = m
        self.n = n
        self.current: tuple[int, ...] | None = tuple(range(1, n + 1))
        self.total = math.comb(m, n)
        self.counter = 1 if self.total else 0

    def next(self) -> tuple[int, ...] | None:
        """Advance to the next subset; None once exhausted."""
        if self.current is None:
            return None
        comb = np.asarray(self.current, np.int64) - 1
        if comb.size == 0 or not _k.next_combination_inplace(comb, self.m):
            self.current = None
            return None
        self.current = tuple(int(v) + 1 for v in comb)
        self.counter += 1
        return self.current

    def __iter__(self):
        while self.current is not None:
            yield self.current
            self.next()


def next_combination(cursor: CombinationCursor):
    return cursor.next()


def combination_at_rank(m: int, n: int, rank: int) -> tuple[int, ...]:
    """0-based combination with the given lexicographic rank."""
    if not 0 <= rank < math.comb(m, n):
        raise ValueError(f"rank {rank} out of range for C({m},{n})")
    comb = []
    x = 0
    for pos in range(n):
        for v in range(x, m):
            block = math.comb(m - 1 - v, n - 1 - pos)
            if rank < block:
                comb.append(v)
                x = v + 1
                break
            rank -= block
    return tuple(comb)


def fisher_yates(items, seed: int):
    """Seeded Fisher-Yates shuffle (Mersenne Twister stream via
    random.Random); returns a new list."""
    out = list(items)
    rng = Random(seed)
    for i in range(len(out) - 1, 0, -1):
        j = rng.randint(0, i)
        out[i], out[j] = out[j], out[i]
    return out


# ---------------------------------------------------------------------------
# dihedral orders


def dihedral_orders(g: PermGroup, cap: int = DEFAULT_ENUM_CAP) -> set[int]:
    """All k such that g contains a dihedral subgroup of order 2k.

    k belongs iff two distinct involutions multiply to an element of order k
    (k = 2 is the commuting-involutions case).
    """
    elems = g.element_matrix(cap)
    orders = _k.orders_batch(elems)
    invs = np.ascontiguousarray(elems[orders == 2])
    if invs.shape[0] == 0:
        return set()
    present = _k.pair_product_orders(invs, int(g.order()))
    return {k for k in range(2, present.shape[0]) if present[k]}


# ---------------------------------------------------------------------------
# maximality


def is_maximal(parent: PermGroup, h: PermGroup,
               cap: int = DEFAULT_ENUM_CAP) -> bool:
    """True iff adjoining any element outside h generates all of parent.

    Tested once per nontrivial coset: adjoining any element of a coset
    generates the same subgroup as adjoining its representative.
    """
    po = parent.order()
    ho = h.order()
    if po > cap:
        raise ValueError(f"parent order {po:,} exceeds cap {cap:,}")
    if ho >= po:
        raise ValueError("h must be a proper subgroup")
    index = po // ho
    elems = parent.element_matrix(cap)
    out_idx = np.empty(index - 1, np.int64)
    cnt = _k.nonmember_coset_reps(h.chain.arrays, elems, out_idx, index - 1)
    h_gens = h.generators
    for t in range(cnt):
        rep = Permutation(elems[out_idx[t]])
        if PermGroup(h_gens + (rep,), degree=parent.degree).order() != po:
            return False
    return True


def maximal_overgroup(parent: PermGroup, h: PermGroup,
                      cap: int = DEFAULT_ENUM_CAP) -> PermGroup:
    """A maximal subgroup of parent containing h.

    Repeatedly adjoins the first element, in enumeration order, whose closure
    with the current subgroup stays proper.  Equivalently tested per coset
    representative, since all elements of a coset give the same closure.
    """
    po = parent.order()
    if po > cap:
        raise ValueError(f"parent order {po:,} exceeds cap {cap:,}")
    if h.order() >= po:
        raise ValueError("h must be a proper subgroup")
    elems = parent.element_matrix(cap)
    current = h
    while True:
        index = po // current.order()
        out_idx = np.empty(index - 1, np.int64)
        cnt = _k.nonmember_coset_reps(current.chain.arrays, elems, out_idx,
                                      index - 1)
        extended = None
        for t in range(cnt):
            rep = Permutation(elems[out_idx[t]])
            cand = PermGroup(current.generators + (rep,),
                             degree=parent.degree)
            if cand.order() < po:
                extended = cand
                break
        if extended is None:
            return current
        current = extended


def tarski_prune(seq: GeneratingSequence, i: int,
                 cap: int = DEFAULT_ENUM_CAP) -> bool:
    """True when the subgroup generated without element i is maximal, in
    which case no extension replacing element i can stay irredundant.

    False promises nothing: an extension may still fail.
    """
    h = seq.deleted(i)
    o = h.order()
    if o == 1 or o >= seq.parent.order():
        return False
    return is_maximal(seq.parent, h, cap)


# ---------------------------------------------------------------------------
# tail splitting and general extensions


def involution_pool(g: PermGroup, cap: int = DEFAULT_ENUM_CAP) -> list[Permutation]:
    """All involutions, sorted by canonical cycle string."""
    elems = g.element_matrix(cap)
    orders = _k.orders_batch(elems)
    pool = [Permutation(elems[i]) for i in np.nonzero(orders == 2)[0]]
    pool.sort(key=lambda p: p.cycle_string())
    return pool


def tarski_extend_involutions(seq: GeneratingSequence,
                              pool=None,
                              cap: int = DEFAULT_ENUM_CAP):
    """Split the last element x into involutions a, b with a*b = x so that
    the lengthened sequence stays irredundant (it generates automatically).

    Scans the involution pool in deterministic order and returns the first
    success, or None.
    """
    elems = seq.elements
    for i, e in enumerate(elems[:-1]):
        if e.order() != 2:
            raise ValueError(f"element {i + 1} must be an involution")
    x = elems[-1]
    if pool is None:
        pool = involution_pool(seq.parent, cap)
    for a in pool:
        b = a * x
        if b.is_identity() or b.order() != 2:
            continue
        candidate = GeneratingSequence(seq.parent, elems[:-1] + (a, b))
        if is_irredundant(candidate):
            return candidate
    return None


def tarski_extend_general(seq: GeneratingSequence, i: int,
                          pool=None,
                          cap: int = DEFAULT_ENUM_CAP):
    """Replace element i by any pair (a, b) with a*b = element i, keeping the
    lengthened sequence irredundant.  Returns the first success or None."""
    if not is_irredundant(seq):
        raise ValueError("sequence must be irredundant")
    if pool is None:
        if seq.parent.order() > cap:
            raise ValueError(
                f"group order {seq.parent.order():,} exceeds cap {cap:,}; "
                "supply an explicit pool")
        pool = seq.parent.elements(cap)
    g_i = seq.elements[i]
    head = seq.elements[:i]
    tail = seq.elements[i + 1:]
    for a in pool:
        if a.is_identity():
            continue
        b = a.inverse() * g_i
        if b.is_identity():
            continue
        candidate = GeneratingSequence(seq.parent, head + (a, b) + tail)
        if is_irredundant(candidate):
            return candidate
    return None


# ---------------------------------------------------------------------------
# the scan


@dataclass
class SearchConfig:
    """Settings for a certificate scan.

    The combination pool is the group's elements of order `pool_order`, or
    the conjugacy class `pool_class`, or an explicit element list.  Tails are
    all elements whose order lies in `tail_orders` (default: every dihedral
    order of the group).  A seed shuffles the combination pool; limits bound
    the run.  max_certificates=0 means unlimited.
    """

    target_size: int = 5
    pool_order: int = 2
    pool_class: str | None = None
    pool_elements: tuple[Permutation, ...] | None = None
    tail_orders: frozenset[int] | None = None
    seed: int | None = None
    max_combinations: int | None = None
    max_seconds: float | None = None
    max_certificates: int = 1
    workers: int = 1
    progress_every: int = 5000
    enum_cap: int = DEFAULT_ENUM_CAP


@dataclass
class ScanResult:
    certificates: list[Certificate]
    combinations_visited: int
    combinations_total: int
    status: str  # exhausted | limit-combinations | limit-time | max-certificates
    pool_size: int
    tail_pool_size: int
    elapsed_seconds: float

    @property
    def exhausted(self) -> bool:
        return self.status == "exhausted"


def _canonical_sort(perms) -> list[Permutation]:
    return sorted(perms, key=lambda p: p.cycle_string())


def _row_cycle_string(row) -> str:
    n = row.shape[0]
    seen = bytearray(n)
    parts = []
    for s in range(n):
        if seen[s] or row[s] == s:
            continue
        cyc = [s + 1]
        seen[s] = 1
        x = int(row[s])
        while x != s:
            seen[x] = 1
            cyc.append(x + 1)
            x = int(row[x])
        parts.append("(" + ",".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


def _rows_in_canonical_order(elems, keep_mask) -> np.ndarray:
    idx = np.nonzero(keep_mask)[0]
    ranked = sorted(idx, key=lambda i: _row_cycle_string(elems[i]))
    if not ranked:
        return np.empty((0, elems.shape[1]), np.int64)
    return np.ascontiguousarray(elems[ranked].astype(np.int64))


def _build_pools(g: PermGroup, cfg: SearchConfig):
    """Combination pool, tail pool and split pool as image matrices."""
    elems = g.element_matrix(cfg.enum_cap)
    orders = _k.orders_batch(elems)

    if cfg.pool_elements is not None:
        pool = list(cfg.pool_elements)
        for i, p in enumerate(pool):
            if not g.contains(p):
                raise ValueError(f"pool element {i + 1} is not in the group")
    elif cfg.pool_class is not None:
        classes = {c.label: c for c in g.conjugacy_classes(cfg.enum_cap)}
        if cfg.pool_class not in classes:
            raise ValueError(f"no conjugacy class labelled {cfg.pool_class!r}")
        pool = list(classes[cfg.pool_class].elements())
    else:
        pool = [Permutation(elems[i])
                for i in np.nonzero(orders == cfg.pool_order)[0]]
    pool = _canonical_sort(pool)
    if cfg.seed is not None:
        pool = fisher_yates(pool, cfg.seed)

    dih = dihedral_orders(g, cfg.enum_cap)
    if cfg.tail_orders is not None:
        bad = set(cfg.tail_orders) - dih
        if bad:
            raise ValueError(
                f"tail orders {sorted(bad)} are not dihedral orders of the "
                f"group (allowed: {sorted(dih)})")
        tail_orders = set(cfg.tail_orders)
    else:
        tail_orders = dih
    tail_mask = np.isin(orders, np.array(sorted(tail_orders), np.int64))
    tails_mat = _rows_in_canonical_order(elems, tail_mask)
    split_mat = _rows_in_canonical_order(elems, orders == 2)

    def matrix(perms):
        if not perms:
            return np.empty((0, g.degree), np.int64)
        return np.ascontiguousarray(
            np.stack([p.images for p in perms]).astype(np.int64))

    return pool, matrix(pool), tails_mat, split_mat


def _certificate_from_hit(g: PermGroup, group_name: str, pool, tails_mat,
                          split_mat, combo, tail_idx, a_idx,
                          enum_cap: int) -> Certificate:
    elements = [pool[int(i)] for i in combo]
    t = Permutation(tails_mat[int(tail_idx)])
    a = Permutation(split_mat[int(a_idx)])
    b = a * t
    elements += [a, b]
    label = None
    try:
        first = g.class_of(elements[0], enum_cap)
        if all(e in first for e in elements[1:]):
            label = first.label
    except ValueError:
        pass
    return Certificate(
        group_name=group_name,
        degree=g.degree,
        group_gens=tuple(p.cycle_string() for p in g.generators),
        claim=CLAIM_IRREDUNDANT_GENERATING,
        elements=tuple(p.cycle_string() for p in elements),
        class_label=label,
    )


def _run_span(pool_mat, tails_mat, split_mat, group_order, c, start_rank,
              count, chunk, stop_after=0, on_chunk=None):
    """Drive scan_chunk across `count` combinations from `start_rank`."""
    m = pool_mat.shape[0]
    comb = np.asarray(combination_at_rank(m, c, start_rank), np.int64)
    out_comb = np.empty((_HIT_BUFFER, c), np.int64)
    out_tail = np.empty(_HIT_BUFFER, np.int64)
    out_a = np.empty(_HIT_BUFFER, np.int64)
    hits = []
    visited = 0
    while visited < count:
        step = min(chunk, count - visited)
        done, nhits, status = _k.scan_chunk(
            pool_mat, tails_mat, split_mat, comb, step, group_order,
            _CHAIN_CAP, out_comb, out_tail, out_a, _HIT_BUFFER, stop_after)
        if status == 2:
            raise RuntimeError("stabilizer chain capacity overflow in scan")
        for h in range(nhits):
            hits.append((tuple(int(v) for v in out_comb[h]),
                         int(out_tail[h]), int(out_a[h])))
        visited += int(done)
        if status == 1:
            continue
        if stop_after and len(hits) >= stop_after:
            break
        if int(done) < step:
            break  # pool exhausted
        if on_chunk is not None and not on_chunk(visited, hits):
            break
    return hits, visited


_WORKER = {}


def _worker_init(pool_mat, tails_mat, split_mat, group_order, c, chunk,
                 stop_after):
    _WORKER["args"] = (pool_mat, tails_mat, split_mat, group_order, c, chunk,
                       stop_after)


def _worker_task(span):
    start_rank, count = span
    (pool_mat, tails_mat, split_mat, group_order, c, chunk,
     stop_after) = _WORKER["args"]
    return _run_span(pool_mat, tails_mat, split_mat, group_order, c,
                     start_rank, count, chunk, stop_after)


def scan(g: PermGroup, cfg: SearchConfig, group_name: str | None = None,
         progress=None) -> ScanResult:
    """Scan for irredundant generating sequences of cfg.target_size.

    Exhaustive scans (no limits, no seed) are deterministic: the same
    certificates in the same order, for any worker count.  `progress` is
    called as progress(visited, total, elapsed_seconds) between chunks.
    """
    if cfg.target_size < 2:
        raise ValueError("target size must be at least 2")
    name = group_name or g.name or "group"
    group_order = g.order()
    pool, pool_mat, tails_mat, split_mat = _build_pools(g, cfg)
    c = cfg.target_size - 2
    m = len(pool)
    total = math.comb(m, c) if m >= c else 0
    start = time.perf_counter()
    max_certs = cfg.max_certificates or 0

    def make_cert(hit):
        combo, ti, ai = hit
        return _certificate_from_hit(g, name, pool, tails_mat, split_mat,
                                     combo, ti, ai, cfg.enum_cap)

    if total == 0:
        return ScanResult([], 0, total, "exhausted", m, tails_mat.shape[0],
                          time.perf_counter() - start)

    if c == 0:
        # target 2: single empty combination, tails tried directly
        hits = []
        scratch = np.empty(g.degree, np.int64)
        trivial, _ = _k.ch_build(np.empty((0, g.degree), np.int64),
                                 _CHAIN_CAP, np.empty(0, np.int64))
        for ti in range(tails_mat.shape[0]):
            t = tails_mat[ti]
            if _k.ch_extend_order(trivial, t, scratch) != group_order:
                continue
            for ai in range(split_mat.shape[0]):
                a = split_mat[ai]
                b = t[a]
                if _k.is_identity(b):
                    continue
                if not _k.is_identity(b[b]):
                    continue
                o_a = _k.ch_extend_order(trivial, a, scratch)
                o_b = _k.ch_extend_order(trivial, b, scratch)
                both = _k.ch_extend2_order(trivial, a, b, scratch)
                if both > o_a and both > o_b:
                    hits.append(((), ti, int(ai)))
                    break
        certs = [make_cert(h) for h in hits]
        if max_certs:
            certs = certs[:max_certs]
        return ScanResult(certs, 1, 1, "exhausted", m, tails_mat.shape[0],
                          time.perf_counter() - start)

    limit = total
    status = "exhausted"
    if cfg.max_combinations is not None and cfg.max_combinations < total:
        limit = cfg.max_combinations
        status = "limit-combinations"

    chunk = max(1, cfg.progress_every)
    certificates: list[Certificate] = []
    visited = 0

    if cfg.workers <= 1:
        deadline = (start + cfg.max_seconds
                    if cfg.max_seconds is not None else None)
        stop_reason = [status]

        def on_chunk(done_so_far, hits):
            if progress is not None:
                progress(done_so_far, total, time.perf_counter() - start)
            if max_certs and len(hits) >= max_certs:
                stop_reason[0] = "max-certificates"
                return False
            if deadline is not None and time.perf_counter() > deadline:
                stop_reason[0] = "limit-time"
                return False
            return True

        hits, visited = _run_span(pool_mat, tails_mat, split_mat, group_order,
                                  c, 0, limit, chunk, max_certs, on_chunk)
        final = stop_reason[0]
        if max_certs and len(hits) >= max_certs:
            hits = hits[:max_certs]
            final = "max-certificates"
        certificates = [make_cert(h) for h in hits]
        if final not in ("max-certificates", "limit-time"):
            final = "exhausted" if visited >= total else status
        return ScanResult(certificates, visited, total, final, m,
                          tails_mat.shape[0], time.perf_counter() - start)

    # worker pool: contiguous rank spans, results merged in rank order
    spans = [(r, min(chunk, limit - r)) for r in range(0, limit, chunk)]
    deadline = (start + cfg.max_seconds
                if cfg.max_seconds is not None else None)
    final = status
    with ProcessPoolExecutor(
            max_workers=cfg.workers, initializer=_worker_init,
            initargs=(pool_mat, tails_mat, split_mat, group_order, c,
                      chunk, max_certs)) as ex:
        all_hits = []
        for hits, done in ex.map(_worker_task, spans):
            all_hits.extend(hits)
            visited += done
            if progress is not None:
                progress(visited, total, time.perf_counter() - start)
            if max_certs and len(all_hits) >= max_certs:
                final = "max-certificates"
                ex.shutdown(wait=False, cancel_futures=True)
                break
            if deadline is not None and time.perf_counter() > deadline:
                final = "limit-time"
                ex.shutdown(wait=False, cancel_futures=True)
                break
    if max_certs:
        all_hits = all_hits[:max_certs]
    certificates = [make_cert(h) for h in all_hits]
    if final not in ("max-certificates", "limit-time"):
        final = "exhausted" if visited >= total else status
    return ScanResult(certificates, visited, total, final, m,
                      tails_mat.shape[0], time.perf_counter() - start)
