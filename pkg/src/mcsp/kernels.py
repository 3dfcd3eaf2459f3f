"""Array kernels behind the skyline engine and hop pruning.

Everything here is written in the numba-compatible subset so the same
source runs jitted or as plain Python (``MCSP_JIT=0``).  Skyline sets are
(k, n) int64 arrays in lexicographic row order; provenance travels in a
parallel (k, 3) int64 array.

Counters array layout (int64[4]):
    0  candidate cells generated by the frontier
    1  pairwise dominance checks
    2  hops concatenated
    3  hops pruned
"""
import numpy as np

from ._jit import njit_

BIG = np.int64(1) << np.int64(62)

C_CAND = 0
C_CHECK = 1
C_HOPS = 2
C_PRUNED = 3


# --- row helpers ------------------------------------------------------------

@njit_
def row_lex_less(a, i, b, j):
    for k in range(a.shape[1]):
        if a[i, k] != b[j, k]:
            return a[i, k] < b[j, k]
    return False


@njit_
def row_weakly_dominates(a, i, b, j):
    for k in range(a.shape[1]):
        if a[i, k] > b[j, k]:
            return False
    return True


@njit_
def vec_weakly_dominates(a, b):
    for k in range(a.shape[0]):
        if a[k] > b[k]:
            return False
    return True


@njit_
def vec_dominates(a, b):
    strict = False
    for k in range(a.shape[0]):
        if a[k] > b[k]:
            return False
        if a[k] < b[k]:
            strict = True
    return strict


@njit_
def vec_lex_le(a, b):
    for k in range(a.shape[0]):
        if a[k] != b[k]:
            return a[k] < b[k]
    return True


# --- skyline of an arbitrary row set ------------------------------------------

@njit_
def skyline_rows(c):
    """Indices of the non-dominated, deduplicated rows of c in lex order."""
    k, n = c.shape
    if k == 0:
        return np.empty(0, np.int64)
    order = np.empty(k, np.int64)
    for i in range(k):
        order[i] = i
    # insertion-free lex sort via argsort on successive keys (stable)
    for col in range(n - 1, -1, -1):
        key = np.empty(k, np.int64)
        for i in range(k):
            key[i] = c[order[i], col]
        idx = np.argsort(key, kind="mergesort")
        order = order[idx]
    keep = np.empty(k, np.int64)
    m = 0
    if n == 2:
        last = BIG
        for t in range(k):
            r = order[t]
            if c[r, 1] < last:
                keep[m] = r
                m += 1
                last = c[r, 1]
        return keep[:m]
    for t in range(k):
        r = order[t]
        dom = False
        for s in range(m):
            if row_weakly_dominates(c, keep[s], c, r):
                dom = True
                break
        if not dom:
            keep[m] = r
            m += 1
    return keep[:m]


# --- merge --------------------------------------------------------------------

@njit_
def merge_sets(ac, ap, bc, bp, counters):
    """Skyline of the union of two canonical sets.  On exact ties the entry
    of ``a`` is kept, so merging into an existing set never churns it."""
    ka = ac.shape[0]
    kb = bc.shape[0]
    n = ac.shape[1]
    w = ap.shape[1]
    oc = np.empty((ka + kb, n), np.int64)
    op = np.empty((ka + kb, w), np.int64)
    side = np.empty(ka + kb, np.int8)
    i = 0
    j = 0
    m = 0
    last = BIG
    while i < ka or j < kb:
        take_a = j >= kb or (i < ka and not row_lex_less(bc, j, ac, i))
        if take_a:
            src_c = ac
            src_p = ap
            r = i
            i += 1
        else:
            src_c = bc
            src_p = bp
            r = j
            j += 1
        if n == 2:
            counters[C_CHECK] += 1
            if src_c[r, 1] >= last:
                continue
            last = src_c[r, 1]
        else:
            dom = False
            me = 0 if take_a else 1
            for s in range(m):
                if side[s] == me:
                    continue
                counters[C_CHECK] += 1
                if row_weakly_dominates(oc, s, src_c, r):
                    dom = True
                    break
            if dom:
                continue
            side[m] = 0 if take_a else 1
        for k in range(n):
            oc[m, k] = src_c[r, k]
        for k in range(w):
            op[m, k] = src_p[r, k]
        m += 1
    return oc[:m].copy(), op[:m].copy()


# --- frontier heap over (i, j) cells ---------------------------------------

@njit_
def _cell_less(L, R, ai, aj, bi, bj):
    for k in range(L.shape[1]):
        x = L[ai, k] + R[aj, k]
        y = L[bi, k] + R[bj, k]
        if x != y:
            return x < y
    if ai != bi:
        return ai < bi
    return aj < bj


@njit_
def _hpush(hi, hj, size, a, b, L, R):
    if size == hi.shape[0]:
        nh = np.empty(2 * size + 8, np.int64)
        nj = np.empty(2 * size + 8, np.int64)
        nh[:size] = hi[:size]
        nj[:size] = hj[:size]
        hi = nh
        hj = nj
    pos = size
    hi[pos] = a
    hj[pos] = b
    while pos > 0:
        par = (pos - 1) >> 1
        if _cell_less(L, R, hi[pos], hj[pos], hi[par], hj[par]):
            t = hi[pos]
            hi[pos] = hi[par]
            hi[par] = t
            t = hj[pos]
            hj[pos] = hj[par]
            hj[par] = t
            pos = par
        else:
            break
    return hi, hj, size + 1


@njit_
def _hpop(hi, hj, size, L, R):
    a = hi[0]
    b = hj[0]
    size -= 1
    if size > 0:
        hi[0] = hi[size]
        hj[0] = hj[size]
        pos = 0
        while True:
            l = 2 * pos + 1
            if l >= size:
                break
            c = l
            if l + 1 < size and _cell_less(L, R, hi[l + 1], hj[l + 1], hi[l], hj[l]):
                c = l + 1
            if _cell_less(L, R, hi[c], hj[c], hi[pos], hj[pos]):
                t = hi[pos]
                hi[pos] = hi[c]
                hi[c] = t
                t = hj[pos]
                hj[pos] = hj[c]
                hj[c] = t
                pos = c
            else:
                break
    return a, b, size


# --- rank index ---------------------------------------------------------------

@njit_
def _count_le(vals, crit, k, x):
    # number of entries <= x in the sorted prefix vals[crit, :k]
    lo = 0
    hi = k
    while lo < hi:
        mid = (lo + hi) >> 1
        if vals[crit, mid] <= x:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit_
def _ha_refine(vals, k, cand, lo, hi):
    """Advance the lazily refined per-criterion binary searches until the
    criterion with the fewest entries <= candidate is known exactly.
    Returns that criterion; lo/hi hold the current brackets."""
    nc = lo.shape[0]
    while True:
        best = -1
        for c in range(nc):
            if best < 0 or lo[c] < lo[best]:
                best = c
        if lo[best] == hi[best]:
            return best
        mid = (lo[best] + hi[best]) >> 1
        if vals[best, mid] <= cand[best + 1]:
            lo[best] = mid + 1
        else:
            hi[best] = mid


@njit_
def _finish_counts(vals, k, cand, lo, hi):
    for c in range(lo.shape[0]):
        while lo[c] < hi[c]:
            mid = (lo[c] + hi[c]) >> 1
            if vals[c, mid] <= cand[c + 1]:
                lo[c] = mid + 1
            else:
                hi[c] = mid


@njit_
def rank_validate(acc, k, vals, ids, cand, strategy, use_rank, counters, info):
    """True iff no accepted row weakly dominates ``cand``.

    acc[:k] holds accepted vectors whose weights are all <= cand[0].
    vals/ids[c, :k] is criterion c+1 sorted ascending (ties by insertion).
    info <- (distinct criterion, its rank, pairwise checks, rule) where
    rule is 0 accepted, 1 dominance found, 9 union-bound rejection,
    10 rank-threshold rejection.
    """
    n = cand.shape[0]
    nc = n - 1
    checks0 = counters[C_CHECK]
    info[0] = -1
    info[1] = 0
    info[3] = 0
    if k == 0:
        info[2] = 0
        return True
    if not use_rank:
        for p in range(k):
            counters[C_CHECK] += 1
            if vec_weakly_dominates(acc[p], cand):
                info[2] = counters[C_CHECK] - checks0
                info[3] = 1
                return False
        info[2] = counters[C_CHECK] - checks0
        return True
    lo = np.zeros(nc, np.int64)
    hi = np.full(nc, k, np.int64)
    dc = _ha_refine(vals, k, cand, lo, hi)
    cnt = lo[dc]
    r = cnt + 1
    info[0] = dc
    info[1] = r
    # rank threshold: every criterion ranks the candidate at r or later
    if (k + 1 - r) * nc < k:
        info[2] = 0
        info[3] = 10
        return False
    if strategy == 1 or 4 * r > 3 * k:
        _finish_counts(vals, k, cand, lo, hi)
    if 4 * r > 3 * k:
        # union of the paths ranked strictly after the candidate
        mark = np.zeros(k, np.bool_)
        u = 0
        for c in range(nc):
            for pos in range(lo[c], k):
                p = ids[c, pos]
                if not mark[p]:
                    mark[p] = True
                    u += 1
        if u < k:
            info[2] = 0
            info[3] = 9
            return False
    if strategy == 1:
        # intersect the at-or-above sets of every criterion
        hits = np.zeros(k, np.int64)
        for c in range(nc):
            for pos in range(lo[c]):
                hits[ids[c, pos]] += 1
        for p in range(k):
            if hits[p] == nc:
                info[2] = 0
                info[3] = 1
                return False
        info[2] = 0
        return True
    for pos in range(cnt):
        p = ids[dc, pos]
        counters[C_CHECK] += 1
        if vec_weakly_dominates(acc[p], cand):
            info[2] = counters[C_CHECK] - checks0
            info[3] = 1
            return False
    info[2] = counters[C_CHECK] - checks0
    return True


@njit_
def rank_insert(acc, k, vals, ids, cand):
    """Append cand as entry k; caller guarantees capacity."""
    n = cand.shape[0]
    for c in range(n):
        acc[k, c] = cand[c]
    for c in range(n - 1):
        pos = _count_le(vals, c, k, cand[c + 1])
        for t in range(k, pos, -1):
            vals[c, t] = vals[c, t - 1]
            ids[c, t] = ids[c, t - 1]
        vals[c, pos] = cand[c + 1]
        ids[c, pos] = k


# --- single hop concatenation ---------------------------------------------------

@njit_
def concat_core(L, R, use_rank, strategy, counters):
    """Skyline of {L[i] + R[j]}.  Returns (costs, i, j).

    Cells leave a lazy frontier in lexicographic order, so a later cell can
    never dominate an earlier one and each candidate is only validated
    against the accepted set.  A freshly generated cell that the last
    accepted entry already dominates is not queued; its successors are
    expanded straight away instead.
    """
    m = L.shape[0]
    q = R.shape[0]
    n = L.shape[1]
    if m == 0 or q == 0:
        return np.empty((0, n), np.int64), np.empty(0, np.int64), np.empty(0, np.int64)
    cap = min(m * q, m + q + 1)
    out = np.empty((cap, n), np.int64)
    oi = np.empty(cap, np.int64)
    oj = np.empty(cap, np.int64)
    vals = np.empty((max(n - 1, 1), cap), np.int64)
    ids = np.empty((max(n - 1, 1), cap), np.int64)
    info = np.zeros(4, np.int64)
    cand = np.empty(n, np.int64)
    visited = np.zeros((m, q), np.bool_)
    hi = np.empty(16, np.int64)
    hj = np.empty(16, np.int64)
    size = 0
    stack = np.empty(2 * (m + q) + 4, np.int64)
    visited[0, 0] = True
    counters[C_CAND] += 1
    hi, hj, size = _hpush(hi, hj, size, 0, 0, L, R)
    k = 0
    while size > 0:
        a, b, size = _hpop(hi, hj, size, L, R)
        for c in range(n):
            cand[c] = L[a, c] + R[b, c]
        if n == 2:
            counters[C_CHECK] += 1
            ok = k == 0 or cand[1] < out[k - 1, 1]
        else:
            ok = rank_validate(out, k, vals, ids, cand, strategy, use_rank, counters, info)
        if ok:
            if k == cap:
                cap2 = min(m * q, 2 * cap)
                out2 = np.empty((cap2, n), np.int64)
                out2[:k] = out[:k]
                out = out2
                oi2 = np.empty(cap2, np.int64)
                oi2[:k] = oi[:k]
                oi = oi2
                oj2 = np.empty(cap2, np.int64)
                oj2[:k] = oj[:k]
                oj = oj2
                v2 = np.empty((vals.shape[0], cap2), np.int64)
                v2[:, :k] = vals[:, :k]
                vals = v2
                d2 = np.empty((ids.shape[0], cap2), np.int64)
                d2[:, :k] = ids[:, :k]
                ids = d2
                cap = cap2
            if n == 2:
                out[k, 0] = cand[0]
                out[k, 1] = cand[1]
            else:
                rank_insert(out, k, vals, ids, cand)
            oi[k] = a
            oj[k] = b
            k += 1
        # lazy insertion of the successors
        top = 0
        if a + 1 < m and not visited[a + 1, b]:
            stack[top] = a + 1
            stack[top + 1] = b
            top += 2
        if b + 1 < q and not visited[a, b + 1]:
            stack[top] = a
            stack[top + 1] = b + 1
            top += 2
        while top > 0:
            top -= 2
            x = stack[top]
            y = stack[top + 1]
            if visited[x, y]:
                continue
            visited[x, y] = True
            counters[C_CAND] += 1
            dom = False
            if k > 0:
                counters[C_CHECK] += 1
                dom = True
                for c in range(n):
                    if L[x, c] + R[y, c] < out[k - 1, c]:
                        dom = False
                        break
            if dom:
                if top + 4 > stack.shape[0]:
                    s2 = np.empty(2 * stack.shape[0], np.int64)
                    s2[:top] = stack[:top]
                    stack = s2
                if x + 1 < m and not visited[x + 1, y]:
                    stack[top] = x + 1
                    stack[top + 1] = y
                    top += 2
                if y + 1 < q and not visited[x, y + 1]:
                    stack[top] = x
                    stack[top + 1] = y + 1
                    top += 2
            else:
                hi, hj, size = _hpush(hi, hj, size, x, y, L, R)
    return out[:k].copy(), oi[:k].copy(), oj[:k].copy()


# --- cubes --------------------------------------------------------------------

@njit_
def hop_cubes(Lc, loff, Rc, roff):
    H = loff.shape[0] - 1
    n = Lc.shape[1]
    inf = np.zeros((H, n), np.int64)
    sup = np.zeros((H, n), np.int64)
    alive = np.zeros(H, np.bool_)
    for h in range(H):
        a0 = loff[h]
        a1 = loff[h + 1]
        b0 = roff[h]
        b1 = roff[h + 1]
        if a0 == a1 or b0 == b1:
            continue
        alive[h] = True
        for c in range(n):
            lmin = Lc[a0, c]
            lmax = Lc[a0, c]
            for r in range(a0 + 1, a1):
                v = Lc[r, c]
                if v < lmin:
                    lmin = v
                if v > lmax:
                    lmax = v
            rmin = Rc[b0, c]
            rmax = Rc[b0, c]
            for r in range(b0 + 1, b1):
                v = Rc[r, c]
                if v < rmin:
                    rmin = v
                if v > rmax:
                    rmax = v
            inf[h, c] = lmin + rmin
            sup[h, c] = lmax + rmax
    return inf, sup, alive


@njit_
def prune_rectangles(Lc, loff, Rc, roff, inf, alive, counters):
    """2D hop pruning on packed label sets; see prune_rectangles_tlbr."""
    H = alive.shape[0]
    tl = np.zeros((H, 2), np.int64)
    br = np.zeros((H, 2), np.int64)
    for h in range(H):
        if not alive[h]:
            continue
        for c in range(2):
            tl[h, c] = Lc[loff[h], c] + Rc[roff[h], c]
            br[h, c] = Lc[loff[h + 1] - 1, c] + Rc[roff[h + 1] - 1, c]
    prune_rectangles_tlbr(tl, br, inf, alive, counters)


@njit_
def prune_rectangles_tlbr(tl, br, inf, alive, counters):
    """Query rectangle from the global minimum-weight top-left and
    minimum-cost bottom-right corners, then drop hops whose infimum is
    strictly dominated by another hop's exact corner."""
    H = alive.shape[0]
    g_tl = -1
    g_br = -1
    for h in range(H):
        if not alive[h]:
            continue
        if g_tl < 0 or row_lex_less(tl, h, tl, g_tl):
            g_tl = h
        if g_br < 0 or br[h, 1] < br[g_br, 1] or (br[h, 1] == br[g_br, 1] and br[h, 0] < br[g_br, 0]):
            g_br = h
    if g_tl < 0:
        return
    wlim = br[g_br, 0]
    clim = tl[g_tl, 1]
    keep = alive.copy()
    for h in range(H):
        if not alive[h]:
            continue
        if tl[h, 0] > wlim or br[h, 1] > clim:
            keep[h] = False
            continue
        for g in range(H):
            if g == h or not alive[g]:
                continue
            if vec_dominates(tl[g], inf[h]) or vec_dominates(br[g], inf[h]):
                keep[h] = False
                break
    for h in range(H):
        if alive[h] and not keep[h]:
            alive[h] = False
            counters[C_PRUNED] += 1


@njit_
def prune_cubes(inf, sup, alive, counters):
    H = alive.shape[0]
    keep = alive.copy()
    for h in range(H):
        if not alive[h]:
            continue
        for g in range(H):
            if g != h and alive[g] and vec_dominates(sup[g], inf[h]):
                keep[h] = False
                break
    for h in range(H):
        if alive[h] and not keep[h]:
            alive[h] = False
            counters[C_PRUNED] += 1


@njit_
def _order_less(a, b, inf, sup, cnt_inf, cnt_sup):
    if cnt_inf[a] != cnt_inf[b]:
        return cnt_inf[a] > cnt_inf[b]
    if cnt_sup[a] != cnt_sup[b]:
        return cnt_sup[a] > cnt_sup[b]
    for c in range(inf.shape[1] - 1, -1, -1):
        if inf[a, c] != inf[b, c]:
            return inf[a, c] < inf[b, c]
    return a < b


@njit_
def cube_order(inf, sup, alive):
    """Concatenation priority of the live cubes (indices into inf/sup)."""
    H = alive.shape[0]
    n = inf.shape[1]
    live = np.empty(H, np.int64)
    m = 0
    for h in range(H):
        if alive[h]:
            live[m] = h
            m += 1
    live = live[:m]
    cnt_inf = np.zeros(H, np.int64)
    cnt_sup = np.zeros(H, np.int64)
    for t in range(m):
        h = live[t]
        for c in range(n):
            si = True
            ss = True
            for u in range(m):
                g = live[u]
                if g == h:
                    continue
                if inf[g, c] <= inf[h, c]:
                    si = False
                if sup[g, c] <= sup[h, c]:
                    ss = False
            if si:
                cnt_inf[h] += 1
            if ss:
                cnt_sup[h] += 1
    for t in range(1, m):
        x = live[t]
        u = t - 1
        while u >= 0 and _order_less(x, live[u], inf, sup, cnt_inf, cnt_sup):
            live[u + 1] = live[u]
            u -= 1
        live[u + 1] = x
    return live


# --- multi-hop ------------------------------------------------------------------

@njit_
def multi_hop_core(Lc, loff, Rc, roff, use_rect, use_cube, use_rank, counters):
    """Skyline of the union over hops h of L_h (+) R_h.
    Returns (costs, prov) with prov rows (hop index, i, j)."""
    n = Lc.shape[1]
    inf, sup, alive = hop_cubes(Lc, loff, Rc, roff)
    if n == 2 and use_rect:
        prune_rectangles(Lc, loff, Rc, roff, inf, alive, counters)
    if use_cube:
        prune_cubes(inf, sup, alive, counters)
        order = cube_order(inf, sup, alive)
    else:
        m = 0
        order = np.empty(alive.shape[0], np.int64)
        for h in range(alive.shape[0]):
            if alive[h]:
                order[m] = h
                m += 1
        order = order[:m]
    res = np.empty((0, n), np.int64)
    prov = np.empty((0, 3), np.int64)
    run_sup = np.zeros(n, np.int64)
    for t in range(order.shape[0]):
        h = order[t]
        if use_cube and res.shape[0] > 0 and vec_dominates(run_sup, inf[h]):
            counters[C_PRUNED] += 1
            continue
        counters[C_HOPS] += 1
        L = Lc[loff[h]:loff[h + 1]]
        R = Rc[roff[h]:roff[h + 1]]
        c, ii, jj = concat_core(L, R, use_rank, 0, counters)
        p = np.empty((c.shape[0], 3), np.int64)
        for r in range(c.shape[0]):
            p[r, 0] = h
            p[r, 1] = ii[r]
            p[r, 2] = jj[r]
        if res.shape[0] == 0:
            res = c
            prov = p
        else:
            res, prov = merge_sets(res, prov, c, p, counters)
        for cc in range(n):
            mx = res[0, cc]
            for r in range(1, res.shape[0]):
                if res[r, cc] > mx:
                    mx = res[r, cc]
            run_sup[cc] = mx
    return res, prov


@njit_
def _feasible(vec, C):
    for c in range(C.shape[0]):
        if vec[c + 1] > C[c]:
            return False
    return True


@njit_
def _row_feasible(a, r, C):
    for c in range(C.shape[0]):
        if a[r, c + 1] > C[c]:
            return False
    return True


@njit_
def best_core(Lc, loff, Rc, roff, C, use_rect, use_cube, use_constraint, use_rank, counters):
    """Lexicographically smallest feasible L_h[i] + R_h[j] over all hops.
    Returns (found, hop, i, j, vec)."""
    n = Lc.shape[1]
    H = loff.shape[0] - 1
    best = np.zeros(n, np.int64)
    bh = -1
    bi = -1
    bj = -1
    if not use_constraint:
        res, prov = multi_hop_core(Lc, loff, Rc, roff, use_rect, use_cube, use_rank, counters)
        for r in range(res.shape[0]):
            if _row_feasible(res, r, C):
                for c in range(n):
                    best[c] = res[r, c]
                return True, prov[r, 0], prov[r, 1], prov[r, 2], best
        return False, -1, -1, -1, best
    # drop label entries that already break a constraint
    lsel = np.empty(Lc.shape[0], np.int64)
    rsel = np.empty(Rc.shape[0], np.int64)
    foff_l = np.zeros(H + 1, np.int64)
    foff_r = np.zeros(H + 1, np.int64)
    a = 0
    b = 0
    for h in range(H):
        for r in range(loff[h], loff[h + 1]):
            if _row_feasible(Lc, r, C):
                lsel[a] = r
                a += 1
        for r in range(roff[h], roff[h + 1]):
            if _row_feasible(Rc, r, C):
                rsel[b] = r
                b += 1
        foff_l[h + 1] = a
        foff_r[h + 1] = b
    FL = np.empty((a, n), np.int64)
    FR = np.empty((b, n), np.int64)
    for r in range(a):
        FL[r] = Lc[lsel[r]]
    for r in range(b):
        FR[r] = Rc[rsel[r]]
    inf, sup, alive = hop_cubes(FL, foff_l, FR, foff_r)
    # infimum already over a constraint: nothing in the cube is feasible
    for h in range(H):
        if alive[h] and not _feasible(inf[h], C):
            alive[h] = False
            counters[C_PRUNED] += 1
    # visit hops by increasing infimum
    m = 0
    order = np.empty(H, np.int64)
    for h in range(H):
        if alive[h]:
            order[m] = h
            m += 1
    order = order[:m]
    for t in range(1, m):
        x = order[t]
        u = t - 1
        while u >= 0 and row_lex_less(inf, x, inf, order[u]):
            order[u + 1] = order[u]
            u -= 1
        order[u + 1] = x
    found = False
    cand = np.empty(n, np.int64)
    for t in range(m):
        h = order[t]
        if found and vec_lex_le(best, inf[h]):
            counters[C_PRUNED] += 1
            continue
        counters[C_HOPS] += 1
        L = FL[foff_l[h]:foff_l[h + 1]]
        R = FR[foff_r[h]:foff_r[h + 1]]
        p = L.shape[0]
        q = R.shape[0]
        visited = np.zeros((p, q), np.bool_)
        hi = np.empty(16, np.int64)
        hj = np.empty(16, np.int64)
        size = 0
        visited[0, 0] = True
        counters[C_CAND] += 1
        hi, hj, size = _hpush(hi, hj, size, 0, 0, L, R)
        while size > 0:
            x, y, size = _hpop(hi, hj, size, L, R)
            for c in range(n):
                cand[c] = L[x, c] + R[y, c]
            if found and vec_lex_le(best, cand):
                break
            if _feasible(cand, C):
                found = True
                best[:] = cand
                bh = h
                bi = lsel[foff_l[h] + x] - loff[h]
                bj = rsel[foff_r[h] + y] - roff[h]
                break
            if x + 1 < p and not visited[x + 1, y]:
                visited[x + 1, y] = True
                counters[C_CAND] += 1
                hi, hj, size = _hpush(hi, hj, size, x + 1, y, L, R)
            if y + 1 < q and not visited[x, y + 1]:
                visited[x, y + 1] = True
                counters[C_CAND] += 1
                hi, hj, size = _hpush(hi, hj, size, x, y + 1, L, R)
    return found, bh, bi, bj, best


# --- batched label assignment -------------------------------------------------

@njit_
def multi_target(Lc, loff, RA, RB, rsel, rlo, rhi, use_rect, use_cube, use_rank, counters):
    """For each target row d, the multi-hop skyline of hops k with left
    set Lc[loff[k]:loff[k+1]] and right set chosen by rsel[d, k]:
    0 -> RA[rlo:rhi], 1 -> RB[rlo:rhi], 2 -> the zero vector (self hop).
    Returns stacked costs, provenance (hop, i, j; j = -1 for a self hop)
    and per-target offsets."""
    D = rsel.shape[0]
    H = rsel.shape[1]
    n = Lc.shape[1]
    cap = 16
    oc = np.empty((cap, n), np.int64)
    op = np.empty((cap, 3), np.int64)
    off = np.zeros(D + 1, np.int64)
    roff = np.zeros(H + 1, np.int64)
    m = 0
    for d in range(D):
        for k in range(H):
            s = rsel[d, k]
            roff[k + 1] = roff[k] + (1 if s == 2 else rhi[d, k] - rlo[d, k])
        Rc = np.zeros((roff[H], n), np.int64)
        for k in range(H):
            s = rsel[d, k]
            if s == 2:
                continue
            base = roff[k]
            for r in range(rlo[d, k], rhi[d, k]):
                if s == 0:
                    for c in range(n):
                        Rc[base, c] = RA[r, c]
                else:
                    for c in range(n):
                        Rc[base, c] = RB[r, c]
                base += 1
        res, prov = multi_hop_core(Lc, loff, Rc, roff, use_rect, use_cube, use_rank, counters)
        kk = res.shape[0]
        if m + kk > cap:
            while m + kk > cap:
                cap *= 2
            oc2 = np.empty((cap, n), np.int64)
            oc2[:m] = oc[:m]
            oc = oc2
            op2 = np.empty((cap, 3), np.int64)
            op2[:m] = op[:m]
            op = op2
        for r in range(kk):
            for c in range(n):
                oc[m, c] = res[r, c]
            op[m, 0] = prov[r, 0]
            op[m, 1] = prov[r, 1]
            op[m, 2] = -1 if rsel[d, prov[r, 0]] == 2 else prov[r, 2]
            m += 1
        off[d + 1] = m
    return oc[:m].copy(), op[:m].copy(), off
