"""Python kernels: the portable twin of the compiled module.

Every function here has an identical signature and bit-identical output in
``graphonlab._speed``.  This module is the readable reference; the compiled
one is the fast path for desk-scale campaigns.  Which one is active is
decided in ``graphonlab._backend``.

Pair-probability codes shared with the compiled kernels:

====  ==============  ===========================================
code  model            per-pair edge probability
====  ==============  ===========================================
0     constant         a0
1     step/grid        mat[idx[i], idx[j]]
2     product          pos[i] * pos[j]  (callers pre-power latents)
3     corner ramp      0 / 1 / min(1, 3*min) by half thresholds
4     diagonal band    1 iff max <= 2 * min
====  ==============  ===========================================

Pairs with probability 0 or 1 never consult the random stream; because the
stream is counter-indexed per pair this cannot shift any other verdict.
"""

import math

import numpy as np

from ._rng import (
    INV53,
    STAGE_ARRIVAL,
    STAGE_EDGE,
    STAGE_MARK,
    STAGE_STEP,
    draw_uniform,
    draw_uniform_vec,
    stream_base,
)

IS_COMPILED = False

_BIG = 1 << 62


def _pair_probs_row(code, a0, mat, idx, pos, i, j_arr):
    """Edge probabilities for pairs (i, j) with j in j_arr."""
    if code == 0:
        return np.full(len(j_arr), a0)
    if code == 1:
        return mat[idx[i], idx[j_arr]]
    if code == 2:
        return pos[i] * pos[j_arr]
    if code == 3:
        lo = np.minimum(pos[i], pos[j_arr])
        hi = np.maximum(pos[i], pos[j_arr])
        ramp = np.minimum(1.0, 3.0 * lo)
        return np.where(hi < 0.5, 0.0, np.where(lo >= 0.5, 1.0, ramp))
    if code == 4:
        lo = np.minimum(pos[i], pos[j_arr])
        hi = np.maximum(pos[i], pos[j_arr])
        return (hi <= 2.0 * lo).astype(np.float64)
    raise ValueError(f"unknown pair-probability code {code}")


def pair_bernoulli_degrees(code, a0, mat, idx, pos, n, seed):
    """Degree sequence of the edge-generating stage, no edge list kept."""
    deg = np.zeros(n, dtype=np.int64)
    for i in range(n - 1):
        j_arr = np.arange(i + 1, n, dtype=np.uint64)
        p = _pair_probs_row(code, a0, mat, idx, pos, i, j_arr)
        u = draw_uniform_vec(seed, STAGE_EDGE, i, j_arr)
        adj = u < p
        deg[i] += int(adj.sum())
        deg[i + 1 :] += adj
    return deg


def pair_bernoulli_edges(code, a0, mat, idx, pos, n, seed):
    """Edge list (heads, tails) of the edge-generating stage; heads < tails."""
    heads = []
    tails = []
    for i in range(n - 1):
        j_arr = np.arange(i + 1, n, dtype=np.uint64)
        p = _pair_probs_row(code, a0, mat, idx, pos, i, j_arr)
        u = draw_uniform_vec(seed, STAGE_EDGE, i, j_arr)
        hit = np.nonzero(u < p)[0]
        if len(hit):
            heads.append(np.full(len(hit), i, dtype=np.int32))
            tails.append((hit + (i + 1)).astype(np.int32))
    if not heads:
        return np.zeros(0, dtype=np.int32), np.zeros(0, dtype=np.int32)
    return np.concatenate(heads), np.concatenate(tails)


# ---------------------------------------------------------------------------
# incremental edge process


def _fenwick_build(w):
    m = len(w)
    tree = [0.0] * (m + 1)
    for i in range(1, m + 1):
        tree[i] += w[i - 1]
        j = i + (i & -i)
        if j <= m:
            tree[j] += tree[i]
    return tree


def _fenwick_add(tree, m, i0, delta):
    i = i0 + 1
    while i <= m:
        tree[i] += delta
        i += i & -i


def _fenwick_find(tree, m, top_bit, target):
    """0-based leaf index whose weight interval contains target."""
    pos = 0
    rem = target
    bit = top_bit
    while bit:
        nxt = pos + bit
        if nxt <= m and tree[nxt] <= rem:
            rem -= tree[nxt]
            pos = nxt
        bit >>= 1
    return pos


def _dsu_find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def incremental_run(n, w, seed, max_k, fill):
    """Run the weighted edge-incremental process to completion.

    w holds the pair weights in triangular order: pair (i, j), i < j, sits
    at index i*(2n-i-1)/2 + (j-i-1).  Returns (order_i, order_j, hit_mindeg,
    hit_conn1, exhausted_at); hit arrays use -1 for "never", steps are
    1-based, exhausted_at is the first step whose visible set was empty.
    With fill=False the process freezes at exhaustion and the order arrays
    are truncated.
    """
    m = n * (n - 1) // 2
    w = [float(x) for x in w]
    picked = [False] * m
    tree = _fenwick_build(w)
    top_bit = 1
    while top_bit * 2 <= m:
        top_bit *= 2
    total = 0.0
    visible = 0
    for x in w:
        total += x
        if x > 0.0:
            visible += 1

    row_start = [0] * (n + 1)
    for i in range(n):
        row_start[i + 1] = row_start[i] + (n - 1 - i)

    def unpair(pid):
        lo, hi = 0, n - 1
        while lo < hi:  # last i with row_start[i] <= pid
            mid = (lo + hi + 1) // 2
            if row_start[mid] <= pid:
                lo = mid
            else:
                hi = mid - 1
        return lo, pid - row_start[lo] + lo + 1

    order_i = np.empty(m, dtype=np.int32)
    order_j = np.empty(m, dtype=np.int32)
    deg = [0] * n
    below = [0] + [n] * max_k  # below[K] = #vertices with degree < K
    hit_min = np.full(max_k + 1, -1, dtype=np.int64)
    hit_min[0] = 0
    parent = list(range(n))
    components = n
    conn1 = -1
    exhausted = -1
    remaining = None
    steps_done = m

    for t in range(1, m + 1):
        u = draw_uniform(seed, STAGE_STEP, t, 0)
        if visible > 0:
            pid = _fenwick_find(tree, m, top_bit, u * total)
            if pid >= m:
                pid = m - 1
            while w[pid] <= 0.0:  # FP boundary: advance to a live pair
                pid += 1
                if pid == m:
                    pid = 0
            delta = w[pid]
            _fenwick_add(tree, m, pid, -delta)
            total -= delta
            w[pid] = 0.0
            visible -= 1
        else:
            if exhausted < 0:
                exhausted = t
                if not fill:
                    steps_done = t - 1
                    break
                remaining = [pid for pid in range(m) if not picked[pid]]
            k = int(u * len(remaining))
            if k >= len(remaining):
                k = len(remaining) - 1
            pid = remaining[k]
            remaining[k] = remaining[-1]
            remaining.pop()
        picked[pid] = True
        i, j = unpair(pid)
        order_i[t - 1] = i
        order_j[t - 1] = j
        for v in (i, j):
            deg[v] += 1
            d = deg[v]
            if d <= max_k:
                below[d] -= 1
                if below[d] == 0 and hit_min[d] < 0:
                    hit_min[d] = t
        ri, rj = _dsu_find(parent, i), _dsu_find(parent, j)
        if ri != rj:
            parent[ri] = rj
            components -= 1
            if components == 1 and conn1 < 0:
                conn1 = t
    return order_i[:steps_done], order_j[:steps_done], hit_min, conn1, exhausted


# ---------------------------------------------------------------------------
# sparse K-connectivity certificate + unit-capacity flows


def ni_certificate(n, indptr, indices, k):
    """Scan-first-search forests F_1..F_k; their union preserves whether
    the graph is K-vertex-connected.  Returns (heads, tails)."""
    r = [0] * n
    scanned = [False] * n
    buckets = [[] for _ in range(n + 1)]
    buckets[0] = list(range(n - 1, -1, -1))
    cur = 0
    heads, tails = [], []
    done = 0
    while done < n:
        while True:
            while cur > 0 and not buckets[cur]:
                cur -= 1
            cand = buckets[cur].pop()
            if not scanned[cand] and r[cand] == cur:
                v = cand
                break
        scanned[v] = True
        done += 1
        for w in indices[indptr[v] : indptr[v + 1]]:
            w = int(w)
            if not scanned[w]:
                if r[w] < k:
                    heads.append(v)
                    tails.append(w)
                r[w] += 1
                buckets[r[w]].append(w)
                if r[w] > cur:
                    cur = r[w]
    return (np.array(heads, dtype=np.int32), np.array(tails, dtype=np.int32))


class _SplitFlow:
    """Unit vertex capacities via node splitting: in(v)=v, out(v)=v+n."""

    def __init__(self, n, heads, tails):
        self.n = n
        self.to = []
        self.nxt = []
        self.head = [-1] * (2 * n)
        self.cap0 = []
        for v in range(n):
            self._arc(v, v + n, 1)
        for a, b in zip(heads, tails):
            self._arc(int(a) + n, int(b), 1)
            self._arc(int(b) + n, int(a), 1)
        self.cap = list(self.cap0)

    def _arc(self, u, v, c):
        for node, other, cc in ((u, v, c), (v, u, 0)):
            self.to.append(other)
            self.cap0.append(cc)
            self.nxt.append(self.head[node])
            self.head[node] = len(self.to) - 1

    def atleast(self, x, y, k):
        """True iff at least k internally disjoint x-y paths exist."""
        self.cap = list(self.cap0)
        s, t = x + self.n, y
        nn = 2 * self.n
        for _ in range(k):
            prev = [-1] * nn
            prev[s] = -2
            queue = [s]
            qi = 0
            found = False
            while qi < len(queue) and not found:
                u = queue[qi]
                qi += 1
                e = self.head[u]
                while e != -1:
                    v = self.to[e]
                    if self.cap[e] > 0 and prev[v] == -1:
                        prev[v] = e
                        if v == t:
                            found = True
                            break
                        queue.append(v)
                    e = self.nxt[e]
            if not found:
                return False
            v = t
            while v != s:
                e = prev[v]
                self.cap[e] -= 1
                self.cap[e ^ 1] += 1
                v = self.to[e ^ 1]  # paired reverse arc points at the tail
        return True


def _sorted_csr(n, heads, tails):
    deg = np.zeros(n, dtype=np.int64)
    np.add.at(deg, heads, 1)
    np.add.at(deg, tails, 1)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(deg, out=indptr[1:])
    indices = np.empty(indptr[-1], dtype=np.int32)
    fill = indptr[:-1].copy()
    for a, b in zip(heads, tails):
        indices[fill[a]] = b
        fill[a] += 1
        indices[fill[b]] = a
        fill[b] += 1
    for v in range(n):
        indices[indptr[v] : indptr[v + 1]].sort()
    return indptr, indices


def _has_edge(indptr, indices, a, b):
    row = indices[indptr[a] : indptr[a + 1]]
    pos = np.searchsorted(row, b)
    return pos < len(row) and row[pos] == b


def kconn_decide(n, indptr, indices, k):
    """Decide vertex connectivity >= k (k >= 2, n > k) by max-flow on the
    sparse certificate; pair selection pins one fixed low-degree vertex."""
    heads, tails = ni_certificate(n, indptr, indices, k)
    hptr, hind = _sorted_csr(n, heads, tails)
    degh = np.diff(hptr)
    if degh.min() < k:
        return False
    v = int(np.argmin(degh))
    nbrs = [int(x) for x in hind[hptr[v] : hptr[v + 1]]]
    nbr_set = set(nbrs)
    flow = _SplitFlow(n, heads, tails)
    for u in range(n):
        if u != v and u not in nbr_set:
            if not flow.atleast(v, u, k):
                return False
    for ai in range(len(nbrs)):
        for bi in range(ai + 1, len(nbrs)):
            a, b = nbrs[ai], nbrs[bi]
            if not _has_edge(hptr, hind, a, b):
                if not flow.atleast(a, b, k):
                    return False
    return True


# ---------------------------------------------------------------------------
# Poisson point process oracles


def _poisson_inv_capped(s, u, cap):
    """Inversion walk: smallest y with u <= CDF_Poisson(s)(y), stopping at
    cap (values >= cap all report cap; the caller only needs the minimum)."""
    if cap <= 0:
        return cap
    pmf = math.exp(-s)
    cdf = pmf
    y = 0
    while u > cdf:
        y += 1
        if y >= cap:
            return cap
        pmf *= s / y
        cdf += pmf
    return y


def oracle_ramp_min(reps, seed, intensity, horizon):
    """Replicated min of Poisson marks over a PPP(intensity) on [0, horizon].

    The horizon extends automatically until the process has at least one
    arrival, so the minimum is always over a nonempty set.
    """
    out = np.empty(reps, dtype=np.int64)
    for rep in range(reps):
        zmin = _BIG
        s = 0.0
        arr = 0
        pt = 0
        while True:
            u = draw_uniform(seed, STAGE_ARRIVAL, rep, arr)
            arr += 1
            s += -math.log(1.0 - u) / intensity
            if s > horizon and pt > 0:
                break
            u2 = draw_uniform(seed, STAGE_MARK, rep, pt)
            pt += 1
            y = _poisson_inv_capped(s, u2, zmin)
            if y < zmin:
                zmin = y
            if zmin == 0:
                break
        out[rep] = zmin
    return out


def oracle_band_count(reps, seed):
    """Replicated count of PPP(1) arrivals strictly inside (s1, 2*s1)."""
    out = np.empty(reps, dtype=np.int64)
    for rep in range(reps):
        u = draw_uniform(seed, STAGE_ARRIVAL, rep, 0)
        s1 = -math.log(1.0 - u)
        s = s1
        arr = 1
        z = 0
        while True:
            u = draw_uniform(seed, STAGE_ARRIVAL, rep, arr)
            arr += 1
            s += -math.log(1.0 - u)
            if s < 2.0 * s1:
                z += 1
            else:
                break
        out[rep] = z
    return out
