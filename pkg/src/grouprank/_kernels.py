"""Hot numeric kernels: permutation arithmetic, stabilizer chains, and the
combination-scan inner loop.

Every function here is compiled with numba's @njit.  Setting the environment
variable GROUPRANK_NO_NUMBA=1 (or running without numba installed) selects a
pure-Python fallback: the same functions run uncompiled, so both paths share
one implementation and produce identical results.  benchmarks/bench_kernels.py
compares the two.

Permutations are int64 image arrays over 0-based points: p[i] is the image of
point i.  Products are read left to right, mul(a, b) = "apply a, then b".

A stabilizer chain is a tuple of arrays

    (meta, base, sgen, sginv, glev, trans, tinv, osize)

meta[0] = number of levels, meta[1] = number of strong generators.  Strong
generator g (row of sgen) participates in every level l <= glev[g].
trans[l, p] is the coset representative mapping base[l] to p (trans[l, p, 0]
is -1 when p is outside the orbit), tinv its inverse.  Orders are returned as
int64 products of orbit sizes; callers that may exceed int64 (degree > 20)
must multiply osize themselves in Python.
"""

import os

import numpy as np

USE_NUMBA = os.environ.get("GROUPRANK_NO_NUMBA", "") not in ("1", "true", "yes")
if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        USE_NUMBA = False

if not USE_NUMBA:
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


# ---------------------------------------------------------------------------
# permutation primitives


@njit(cache=True)
def mul_into(a, b, out):
    """out = a * b, i.e. apply a first, then b."""
    for i in range(a.shape[0]):
        out[i] = b[a[i]]


@njit(cache=True)
def inv_into(a, out):
    for i in range(a.shape[0]):
        out[a[i]] = i


@njit(cache=True)
def is_identity(a):
    for i in range(a.shape[0]):
        if a[i] != i:
            return False
    return True


@njit(cache=True)
def perm_order(a):
    """Order of a permutation: lcm of its cycle lengths."""
    n = a.shape[0]
    seen = np.zeros(n, np.bool_)
    o = np.int64(1)
    for s in range(n):
        if seen[s]:
            continue
        length = np.int64(0)
        x = s
        while True:
            seen[x] = True
            length += 1
            x = a[x]
            if x == s:
                break
        # o = lcm(o, length)
        g = o
        h = length
        while h != 0:
            g, h = h, g % h
        o = o // g * length
    return o


@njit(cache=True)
def orders_batch(elems):
    out = np.empty(elems.shape[0], np.int64)
    for r in range(elems.shape[0]):
        out[r] = perm_order(elems[r])
    return out


# ---------------------------------------------------------------------------
# stabilizer chains


@njit(cache=True)
def ch_alloc(n, cap):
    meta = np.zeros(2, np.int64)
    base = np.full(n, -1, np.int64)
    sgen = np.empty((cap, n), np.int64)
    sginv = np.empty((cap, n), np.int64)
    glev = np.empty(cap, np.int64)
    trans = np.empty((n, n, n), np.int64)
    tinv = np.empty((n, n, n), np.int64)
    osize = np.zeros(n, np.int64)
    return (meta, base, sgen, sginv, glev, trans, tinv, osize)


@njit(cache=True)
def ch_add_gen(ch, g):
    """Register g as a strong generator.

    Returns the level it was assigned to, -1 for the identity (ignored) or
    -2 when the generator table is full.
    """
    meta, base, sgen, sginv, glev, trans, tinv, osize = ch
    n = sgen.shape[1]
    if is_identity(g):
        return -1
    if meta[1] >= sgen.shape[0]:
        return -2
    nlev = meta[0]
    l = 0
    while l < nlev and g[base[l]] == base[l]:
        l += 1
    if l == nlev:
        # g fixes the whole base: open a new level at its least moved point
        for i in range(n):
            if g[i] != i:
                base[nlev] = i
                break
        osize[nlev] = 1  # valid lower bound until the orbit is computed
        meta[0] = nlev + 1
    k = meta[1]
    for i in range(n):
        sgen[k, i] = g[i]
        sginv[k, g[i]] = i
    glev[k] = l
    meta[1] = k + 1
    return l


@njit(cache=True)
def ch_orbit(ch, l):
    """Recompute the orbit and transversal of base[l] at level l."""
    meta, base, sgen, sginv, glev, trans, tinv, osize = ch
    n = sgen.shape[1]
    for p in range(n):
        trans[l, p, 0] = -1
    b = base[l]
    for i in range(n):
        trans[l, b, i] = i
        tinv[l, b, i] = i
    queue = np.empty(n, np.int64)
    queue[0] = b
    qn = 1
    qh = 0
    while qh < qn:
        p = queue[qh]
        qh += 1
        for gi in range(meta[1]):
            if glev[gi] < l:
                continue
            q = sgen[gi, p]
            if trans[l, q, 0] == -1:
                for i in range(n):
                    trans[l, q, i] = sgen[gi, trans[l, p, i]]
                for i in range(n):
                    tinv[l, q, trans[l, q, i]] = i
                queue[qn] = q
                qn += 1
    osize[l] = qn


@njit(cache=True)
def ch_process(ch, start):
    """Deterministic Schreier-Sims verification loop from level `start` down.

    Levels deeper than `start` must already be complete.  Returns False when
    the strong generator table overflows.
    """
    meta, base, sgen, sginv, glev, trans, tinv, osize = ch
    n = sgen.shape[1]
    tmp = np.empty(n, np.int64)
    res = np.empty(n, np.int64)
    if meta[0] == 0:
        return True
    i = start
    if i > meta[0] - 1:
        i = meta[0] - 1
    while i >= 0:
        ch_orbit(ch, i)
        restart = False
        for p in range(n):
            if trans[i, p, 0] == -1:
                continue
            for gi in range(meta[1]):
                if glev[gi] < i:
                    continue
                q = sgen[gi, p]
                # Schreier generator u_p * g * u_{pg}^{-1}; it fixes base[i]
                for x in range(n):
                    tmp[x] = sgen[gi, trans[i, p, x]]
                for x in range(n):
                    res[x] = tinv[i, q, tmp[x]]
                # sift through deeper levels
                j = i + 1
                ident = is_identity(res)
                while not ident and j < meta[0]:
                    p2 = res[base[j]]
                    if p2 == base[j]:
                        j += 1
                        continue
                    if trans[j, p2, 0] == -1:
                        break
                    for x in range(n):
                        res[x] = tinv[j, p2, res[x]]
                    j += 1
                    ident = is_identity(res)
                if ident:
                    continue
                lvl = ch_add_gen(ch, res)
                if lvl == -2:
                    return False
                i = lvl
                restart = True
                break
            if restart:
                break
        if not restart:
            i -= 1
    return True


@njit(cache=True)
def ch_build(gens, cap, prefix):
    """Build a chain for the group generated by the rows of `gens`.

    `prefix` forces the first base points (used for point stabilizers); pass
    an empty array for the default base, which starts at the least point
    moved by any generator and extends by least moved points of residues.
    """
    k, n = gens.shape
    ch = ch_alloc(n, cap)
    meta, base = ch[0], ch[1]
    for i in range(prefix.shape[0]):
        base[i] = prefix[i]
        ch[7][i] = 1
    meta[0] = prefix.shape[0]
    if prefix.shape[0] == 0:
        least = -1
        for gi in range(k):
            for x in range(n):
                if gens[gi, x] != x:
                    if least == -1 or x < least:
                        least = x
                    break
        if least >= 0:
            base[0] = least
            ch[7][0] = 1
            meta[0] = 1
    for gi in range(k):
        if ch_add_gen(ch, gens[gi]) == -2:
            return ch, False
    if meta[1] == 0:
        # trivial group: drop any forced base levels, order is 1
        meta[0] = 0
        return ch, True
    ok = ch_process(ch, meta[0] - 1)
    return ch, ok


@njit(cache=True)
def ch_order(ch):
    meta, osize = ch[0], ch[7]
    o = np.int64(1)
    for l in range(meta[0]):
        o *= osize[l]
    return o


@njit(cache=True)
def ch_sift(ch, g, res):
    """Sift g through the chain.  res receives the residue; True iff member."""
    meta, base, sgen, sginv, glev, trans, tinv, osize = ch
    n = sgen.shape[1]
    for x in range(n):
        res[x] = g[x]
    for l in range(meta[0]):
        p = res[base[l]]
        if p == base[l]:
            continue
        if trans[l, p, 0] == -1:
            return False
        for x in range(n):
            res[x] = tinv[l, p, res[x]]
    return is_identity(res)


@njit(cache=True)
def ch_copy(ch):
    meta, base, sgen, sginv, glev, trans, tinv, osize = ch
    cap = sgen.shape[0]
    n = sgen.shape[1]
    meta2 = meta.copy()
    base2 = base.copy()
    sgen2 = np.empty((cap, n), np.int64)
    sginv2 = np.empty((cap, n), np.int64)
    glev2 = glev.copy()
    trans2 = np.empty((n, n, n), np.int64)
    tinv2 = np.empty((n, n, n), np.int64)
    osize2 = osize.copy()
    for r in range(meta[1]):
        for x in range(n):
            sgen2[r, x] = sgen[r, x]
            sginv2[r, x] = sginv[r, x]
    for l in range(meta[0]):
        for p in range(n):
            for x in range(n):
                trans2[l, p, x] = trans[l, p, x]
                tinv2[l, p, x] = tinv[l, p, x]
    return (meta2, base2, sgen2, sginv2, glev2, trans2, tinv2, osize2)


@njit(cache=True)
def ch_extend(ch, g, scratch):
    """Chain for <ch, g>.  Shares ch when g is already a member.

    Returns (chain, status): status 0 shared, 1 extended, -1 overflow.
    """
    if ch_sift(ch, g, scratch):
        return ch, 0
    ch2 = ch_copy(ch)
    lvl = ch_add_gen(ch2, g)
    if lvl == -2:
        return ch2, -1
    if not ch_process(ch2, lvl):
        return ch2, -1
    return ch2, 1


@njit(cache=True)
def ch_extend_order(ch, g, scratch):
    """Order of <ch, g>; -1 on generator-table overflow."""
    ch2, status = ch_extend(ch, g, scratch)
    if status < 0:
        return np.int64(-1)
    return ch_order(ch2)


@njit(cache=True)
def ch_extend2_order(ch, g1, g2, scratch):
    """Order of <ch, g1, g2>; -1 on overflow."""
    ch2, status = ch_extend(ch, g1, scratch)
    if status < 0:
        return np.int64(-1)
    return ch_extend_order(ch2, g2, scratch)


@njit(cache=True)
def ch_enumerate(ch, out):
    """Write every group element to `out`, depth-first over transversal
    products with orbit points taken in ascending order.  Returns the count.
    """
    meta, base, sgen, sginv, glev, trans, tinv, osize = ch
    n = sgen.shape[1]
    k = meta[0]
    if k == 0:
        for x in range(n):
            out[0, x] = x
        return 1
    opts = np.full((k, n), -1, np.int64)
    ocnt = np.zeros(k, np.int64)
    for l in range(k):
        c = 0
        for p in range(n):
            if trans[l, p, 0] != -1:
                opts[l, c] = p
                c += 1
        ocnt[l] = c
    part = np.empty((k, n), np.int64)
    idx = np.zeros(k, np.int64)
    cnt = 0

    l = 0
    p = opts[0, 0]
    for x in range(n):
        part[0, x] = trans[0, p, x]
    while True:
        if l < k - 1:
            l += 1
            idx[l] = 0
            p = opts[l, 0]
            for x in range(n):
                part[l, x] = part[l - 1, trans[l, p, x]]
        else:
            for x in range(n):
                out[cnt, x] = part[l, x]
            cnt += 1
            while l >= 0 and idx[l] == ocnt[l] - 1:
                l -= 1
            if l < 0:
                break
            idx[l] += 1
            p = opts[l, idx[l]]
            if l == 0:
                for x in range(n):
                    part[0, x] = trans[0, p, x]
            else:
                for x in range(n):
                    part[l, x] = part[l - 1, trans[l, p, x]]
    return cnt


@njit(cache=True)
def sift_batch(ch, elems, out):
    """out[r] = membership of elems[r]."""
    n = elems.shape[1]
    res = np.empty(n, np.int64)
    for r in range(elems.shape[0]):
        out[r] = ch_sift(ch, elems[r], res)


# ---------------------------------------------------------------------------
# sorted element tables (conjugacy classes, multiplication tables)


@njit(cache=True)
def row_find(mat, v):
    """Binary search for row v in a lexicographically sorted matrix."""
    lo = 0
    hi = mat.shape[0]
    n = mat.shape[1]
    while lo < hi:
        mid = (lo + hi) // 2
        c = 0
        for x in range(n):
            if mat[mid, x] < v[x]:
                c = -1
                break
            if mat[mid, x] > v[x]:
                c = 1
                break
        if c == 0:
            return mid
        if c < 0:
            lo = mid + 1
        else:
            hi = mid
    return -1


@njit(cache=True)
def class_partition(elems, gens, ginvs):
    """Conjugation-orbit labels over a lexicographically sorted element table.

    Classes are numbered by their least member, so label k's representative is
    the first row carrying k.
    """
    nelem, n = elems.shape
    k = gens.shape[0]
    label = np.full(nelem, -1, np.int64)
    queue = np.empty(nelem, np.int64)
    tmp = np.empty(n, np.int64)
    ncls = 0
    for seed in range(nelem):
        if label[seed] != -1:
            continue
        label[seed] = ncls
        queue[0] = seed
        qh = 0
        qn = 1
        while qh < qn:
            e = queue[qh]
            qh += 1
            for gi in range(k):
                # conjugate: g^{-1} * x * g under left-to-right products
                for z in range(n):
                    tmp[z] = gens[gi, elems[e, ginvs[gi, z]]]
                t = row_find(elems, tmp)
                if label[t] == -1:
                    label[t] = ncls
                    queue[qn] = t
                    qn += 1
        ncls += 1
    return label, ncls


@njit(cache=True)
def mult_table(elems):
    """table[i, j] = index of elems[i] * elems[j] in the sorted table."""
    nelem, n = elems.shape
    table = np.empty((nelem, nelem), np.int32)
    tmp = np.empty(n, np.int64)
    for i in range(nelem):
        for j in range(nelem):
            for x in range(n):
                tmp[x] = elems[j, elems[i, x]]
            table[i, j] = row_find(elems, tmp)
    return table


@njit(cache=True)
def table_closure(table, gens_idx, id_idx, member):
    """Closure of gens_idx in a multiplication table, written into `member`.

    Right-multiplication BFS from the identity index.  Returns the size.
    """
    nelem = table.shape[0]
    for i in range(nelem):
        member[i] = False
    queue = np.empty(nelem, np.int64)
    member[id_idx] = True
    queue[0] = id_idx
    qh = 0
    qn = 1
    while qh < qn:
        x = queue[qh]
        qh += 1
        for t in range(gens_idx.shape[0]):
            y = table[x, gens_idx[t]]
            if not member[y]:
                member[y] = True
                queue[qn] = y
                qn += 1
    return qn


@njit(cache=True)
def pair_product_orders(invs, maxorder):
    """present[k] = a distinct pair of rows multiplies to an element of order k."""
    m, n = invs.shape
    present = np.zeros(maxorder + 1, np.bool_)
    tmp = np.empty(n, np.int64)
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            for x in range(n):
                tmp[x] = invs[j, invs[i, x]]
            o = perm_order(tmp)
            if o <= maxorder:
                present[o] = True
    return present


@njit(cache=True)
def nonmember_coset_reps(h_ch, elems, out_idx, max_reps):
    """First element of each right coset of H other than H itself.

    `elems` is scanned in order; returns the number of representatives found,
    stopping once max_reps are collected.
    """
    N, n = elems.shape
    res = np.empty(n, np.int64)
    tmp = np.empty(n, np.int64)
    rinv = np.empty((max_reps, n), np.int64)
    cnt = 0
    for r in range(N):
        if ch_sift(h_ch, elems[r], res):
            continue
        found = False
        for t in range(cnt):
            # same right coset iff e * rep^{-1} lies in H
            for x in range(n):
                tmp[x] = rinv[t, elems[r, x]]
            if ch_sift(h_ch, tmp, res):
                found = True
                break
        if not found:
            out_idx[cnt] = r
            for x in range(n):
                rinv[cnt, elems[r, x]] = x
            cnt += 1
            if cnt >= max_reps:
                return cnt
    return cnt


# ---------------------------------------------------------------------------
# combination scan


@njit(cache=True)
def next_combination_inplace(comb, m):
    """Advance a 0-based lexicographic combination; False when exhausted."""
    c = comb.shape[0]
    i = c - 1
    while i >= 0:
        if comb[i] < m - (c - i):
            comb[i] += 1
            for j in range(i + 1, c):
                comb[j] = comb[j - 1] + 1
            return True
        i -= 1
    return False


# The scan needs many simultaneous chains without heap churn or container
# types, so it draws them from a "bank": stacked chain arrays indexed by an
# integer slot.  bank_view(bank, s) yields an ordinary chain tuple aliasing
# slot s, usable with every ch_* function above.


@njit(cache=True)
def bank_alloc(slots, n, cap):
    metas = np.zeros((slots, 2), np.int64)
    bases = np.full((slots, n), -1, np.int64)
    sgens = np.empty((slots, cap, n), np.int64)
    sginvs = np.empty((slots, cap, n), np.int64)
    glevs = np.empty((slots, cap), np.int64)
    transs = np.empty((slots, n, n, n), np.int64)
    tinvs = np.empty((slots, n, n, n), np.int64)
    osizes = np.zeros((slots, n), np.int64)
    return (metas, bases, sgens, sginvs, glevs, transs, tinvs, osizes)


@njit(cache=True)
def bank_view(bank, s):
    metas, bases, sgens, sginvs, glevs, transs, tinvs, osizes = bank
    return (metas[s], bases[s], sgens[s], sginvs[s], glevs[s], transs[s],
            tinvs[s], osizes[s])


@njit(cache=True)
def bank_build(bank, s, gens):
    """Build the group generated by `gens` into slot s (default base)."""
    ch = bank_view(bank, s)
    meta, base, sgen, osize = ch[0], ch[1], ch[2], ch[7]
    n = sgen.shape[1]
    meta[0] = 0
    meta[1] = 0
    least = -1
    for gi in range(gens.shape[0]):
        for x in range(n):
            if gens[gi, x] != x:
                if least == -1 or x < least:
                    least = x
                break
    if least >= 0:
        base[0] = least
        osize[0] = 1
        meta[0] = 1
    for gi in range(gens.shape[0]):
        if ch_add_gen(ch, gens[gi]) == -2:
            return False
    if meta[1] == 0:
        meta[0] = 0
        return True
    return ch_process(ch, meta[0] - 1)


@njit(cache=True)
def bank_copy(bank, src, dst):
    metas, bases, sgens, sginvs, glevs, transs, tinvs, osizes = bank
    nlev = metas[src, 0]
    nsg = metas[src, 1]
    metas[dst, 0] = nlev
    metas[dst, 1] = nsg
    bases[dst] = bases[src]
    osizes[dst] = osizes[src]
    glevs[dst, :nsg] = glevs[src, :nsg]
    sgens[dst, :nsg] = sgens[src, :nsg]
    sginvs[dst, :nsg] = sginvs[src, :nsg]
    transs[dst, :nlev] = transs[src, :nlev]
    tinvs[dst, :nlev] = tinvs[src, :nlev]


@njit(cache=True)
def bank_order(bank, s):
    return ch_order(bank_view(bank, s))


@njit(cache=True)
def ch_process_capped(ch, start, cap_order):
    """ch_process with an early exit: the product of stored orbit sizes is
    always a valid lower bound on the subgroup order (the transversal
    products are distinct group elements), so once it reaches cap_order the
    subgroup provably has that order.

    Returns 1 on the early exit (chain left unverified!), 0 on normal
    completion (chain verified), -1 on generator-table overflow.
    """
    meta, base, sgen, sginv, glev, trans, tinv, osize = ch
    n = sgen.shape[1]
    tmp = np.empty(n, np.int64)
    res = np.empty(n, np.int64)
    if meta[0] == 0:
        return 0
    i = start
    if i > meta[0] - 1:
        i = meta[0] - 1
    while i >= 0:
        ch_orbit(ch, i)
        prod = np.int64(1)
        for l in range(meta[0]):
            prod *= osize[l]
        if prod >= cap_order:
            return 1
        restart = False
        for p in range(n):
            if trans[i, p, 0] == -1:
                continue
            for gi in range(meta[1]):
                if glev[gi] < i:
                    continue
                q = sgen[gi, p]
                for x in range(n):
                    tmp[x] = sgen[gi, trans[i, p, x]]
                for x in range(n):
                    res[x] = tinv[i, q, tmp[x]]
                j = i + 1
                ident = is_identity(res)
                while not ident and j < meta[0]:
                    p2 = res[base[j]]
                    if p2 == base[j]:
                        j += 1
                        continue
                    if trans[j, p2, 0] == -1:
                        break
                    for x in range(n):
                        res[x] = tinv[j, p2, res[x]]
                    j += 1
                    ident = is_identity(res)
                if ident:
                    continue
                lvl = ch_add_gen(ch, res)
                if lvl == -2:
                    return -1
                i = lvl
                restart = True
                break
            if restart:
                break
        if not restart:
            i -= 1
    return 0


@njit(cache=True)
def bank_extend(bank, src, dst, g, scratch):
    """Chain for <slot src, g>.

    Returns the slot holding the result: src when g was already a member
    (nothing written), dst otherwise; -1 on overflow.
    """
    ch = bank_view(bank, src)
    if ch_sift(ch, g, scratch):
        return src
    bank_copy(bank, src, dst)
    ch2 = bank_view(bank, dst)
    lvl = ch_add_gen(ch2, g)
    if lvl == -2:
        return -1
    if not ch_process(ch2, lvl):
        return -1
    return dst


@njit(cache=True)
def bank_extend_capped(bank, src, dst, g, scratch, cap_order):
    """Like bank_extend but stops as soon as the extension provably reaches
    cap_order.  Returns (slot, reached): on reached=True the slot contents
    are unverified and must be discarded."""
    ch = bank_view(bank, src)
    if ch_sift(ch, g, scratch):
        return src, ch_order(ch) >= cap_order
    bank_copy(bank, src, dst)
    ch2 = bank_view(bank, dst)
    lvl = ch_add_gen(ch2, g)
    if lvl == -2:
        return -1, False
    r = ch_process_capped(ch2, lvl, cap_order)
    if r < 0:
        return -1, False
    if r == 1:
        return dst, True
    return dst, ch_order(ch2) >= cap_order


@njit(cache=True)
def bank_extend_order_capped(bank, src, tmp, g, scratch, cap_order):
    """Order of <slot src, g>, reported as cap_order whenever it reaches it;
    -1 on overflow."""
    s, reached = bank_extend_capped(bank, src, tmp, g, scratch, cap_order)
    if s < 0:
        return np.int64(-1)
    if reached:
        return cap_order
    return bank_order(bank, s)


@njit(cache=True)
def bank_extend2_order_capped(bank, src, tmp1, tmp2, g1, g2, scratch,
                              cap_order):
    """Order of <slot src, g1, g2> with the same cap semantics."""
    s1, reached = bank_extend_capped(bank, src, tmp1, g1, scratch, cap_order)
    if s1 < 0:
        return np.int64(-1)
    if reached:
        return cap_order
    s2, reached = bank_extend_capped(bank, s1, tmp2, g2, scratch, cap_order)
    if s2 < 0:
        return np.int64(-1)
    if reached:
        return cap_order
    return bank_order(bank, s2)


@njit(cache=True)
def scan_chunk(pool, tails, invpool, comb, ncombs, group_order, cap,
               out_comb, out_tail, out_a, max_hits, stop_after):
    """Scan up to `ncombs` combinations of pool rows, starting at `comb`.

    For each visited combination (c involutions, c >= 1) and each tail of
    allowed order, tests that the (c+1)-sequence is irredundant and
    generating, then tries to split the tail into a pair of involutions
    keeping the (c+2)-sequence irredundant.  Hits are recorded as
    (combination, tail index, first-involution index).

    Chains for the first c-1 combination members are cached across the inner
    loop over the last member, and every subgroup order is computed by
    extending an existing chain with one generator, stopping early once the
    extension provably reaches the relevant order.

    When stop_after > 0 the chunk returns at the end of the first
    combination that brings the hit count to stop_after or more.

    `comb` is advanced in place to the next unvisited combination.  Returns
    (combos_done, nhits, status) with status 0 = chunk done or pool
    exhausted, 1 = hit buffer full (combinations counted in combos_done are
    fully recorded; the current one was rolled back), 2 = chain capacity
    overflow.
    """
    c = comb.shape[0]
    m = pool.shape[0]
    T = tails.shape[0]
    npairs = invpool.shape[0]
    n = pool.shape[1]
    scratch = np.empty(n, np.int64)
    bperm = np.empty(n, np.int64)

    # chain bank slots: 0 = P (prefix), 1+j = D_j (prefix minus member j),
    # c+j = L_j (combination minus member j), then K and two scratch slots.
    s_k = 2 * c - 1
    s_t1 = 2 * c
    s_t2 = 2 * c + 1
    bank = bank_alloc(2 * c + 2, n, cap)

    # prefix generator staging
    pgens = np.empty((c, n), np.int64)
    dgens = np.empty((c, n), np.int64)
    del_slots = np.empty(c, np.int64)
    del_orders = np.empty(c, np.int64)

    done = np.int64(0)
    nhits = 0
    have_prefix = False
    prefix_dead = False  # prefix full or redundant: every completion fails
    p_order = np.int64(1)

    while done < ncombs:
        if not have_prefix:
            for j in range(c - 1):
                for x in range(n):
                    pgens[j, x] = pool[comb[j], x]
            if not bank_build(bank, 0, pgens[:c - 1]):
                return done, nhits, 2
            p_order = bank_order(bank, 0)
            prefix_dead = p_order == group_order
            if not prefix_dead:
                for j in range(c - 1):
                    r = 0
                    for jj in range(c - 1):
                        if jj == j:
                            continue
                        for x in range(n):
                            dgens[r, x] = pool[comb[jj], x]
                        r += 1
                    if not bank_build(bank, 1 + j, dgens[:c - 2]):
                        return done, nhits, 2
                    if bank_order(bank, 1 + j) == p_order:
                        # a prefix member is absorbed by the others, so every
                        # completion of this prefix is redundant
                        prefix_dead = True
                        break
            have_prefix = True

        if prefix_dead:
            # skip the remaining completions, still counting them as visited
            in_prefix = m - comb[c - 1]
            skip = in_prefix
            if done + skip > ncombs:
                skip = ncombs - done
            done += skip
            for _ in range(skip):
                if not next_combination_inplace(comb, m):
                    return done, nhits, 0
            if skip == in_prefix:
                have_prefix = False
            if done >= ncombs:
                return done, nhits, 0
            continue

        hits_at_start = nhits
        d = comb[c - 1]

        # K = <combination>: alive only if the last member properly extends
        # the prefix without generating everything
        ks, reached = bank_extend_capped(bank, 0, s_k, pool[d], scratch,
                                         group_order)
        if ks < 0:
            return done, nhits, 2
        combo_ok = ks == s_k and not reached
        k_order = bank_order(bank, s_k) if combo_ok else np.int64(0)
        if combo_ok:
            # combination irredundancy: no member absorbed by the others;
            # d is outside the prefix, so each extension lands in slot c+j
            for j in range(c - 1):
                lj, reached = bank_extend_capped(bank, 1 + j, c + j, pool[d],
                                                 scratch, k_order)
                if lj < 0:
                    return done, nhits, 2
                if reached:
                    combo_ok = False
                    break

        if combo_ok:
            # deletion subgroups ordered by decreasing order: bigger ones
            # regenerate the group more often, so they reject tails sooner
            for j in range(c - 1):
                del_slots[j] = c + j
                del_orders[j] = bank_order(bank, c + j)
            del_slots[c - 1] = 0
            del_orders[c - 1] = p_order
            for ii in range(c):
                top = ii
                for jj in range(ii + 1, c):
                    if del_orders[jj] > del_orders[top]:
                        top = jj
                if top != ii:
                    ts = del_slots[ii]
                    del_slots[ii] = del_slots[top]
                    del_slots[top] = ts
                    to = del_orders[ii]
                    del_orders[ii] = del_orders[top]
                    del_orders[top] = to

            for ti in range(T):
                t = tails[ti]
                # no deletion may regenerate the whole group
                bad = False
                for di in range(c):
                    if bank_extend_order_capped(
                            bank, del_slots[di], s_t1, t, scratch,
                            group_order) == group_order:
                        bad = True
                        break
                if bad:
                    continue
                # the full sequence must generate
                if bank_extend_order_capped(
                        bank, s_k, s_t1, t, scratch,
                        group_order) != group_order:
                    continue
                # irredundant generating sequence: try to split the tail into
                # two involutions a, b with a*b = t
                for ai in range(npairs):
                    a = invpool[ai]
                    for x in range(n):
                        bperm[x] = t[a[x]]
                    if is_identity(bperm):
                        continue
                    ok2 = True
                    for x in range(n):
                        if bperm[bperm[x]] != x:
                            ok2 = False
                            break
                    if not ok2:
                        continue
                    # deletions of b, of a, of the last member, of the rest
                    if bank_extend_order_capped(
                            bank, s_k, s_t1, a, scratch,
                            group_order) == group_order:
                        continue
                    if bank_extend_order_capped(
                            bank, s_k, s_t1, bperm, scratch,
                            group_order) == group_order:
                        continue
                    if bank_extend2_order_capped(
                            bank, 0, s_t1, s_t2, a, bperm, scratch,
                            group_order) == group_order:
                        continue
                    bad2 = False
                    for j in range(c - 1):
                        if bank_extend2_order_capped(
                                bank, c + j, s_t1, s_t2, a, bperm, scratch,
                                group_order) == group_order:
                            bad2 = True
                            break
                    if bad2:
                        continue
                    if nhits >= max_hits:
                        # roll back this combination and let the caller retry
                        return done, hits_at_start, 1
                    for j in range(c):
                        out_comb[nhits, j] = comb[j]
                    out_tail[nhits] = ti
                    out_a[nhits] = ai
                    nhits += 1
                    break  # first split wins; move to the next tail

        done += 1
        old_tail = comb[c - 1]
        if not next_combination_inplace(comb, m):
            return done, nhits, 0
        if stop_after > 0 and nhits >= stop_after:
            return done, nhits, 0
        if c >= 2 and comb[c - 1] != old_tail + 1:
            have_prefix = False
    return done, nhits, 0
