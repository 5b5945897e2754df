# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for the hot loops.

Bit-identical to graphonlab._kernels_py: the same counter-based word
function, the same arithmetic in the same order.  Anything statistical that
differs between the two modules is a bug; tests/test_backends.py compares
them directly.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, log, pow

cnp.import_array()

IS_COMPILED = True

ctypedef unsigned long long u64

cdef u64 _GOLDEN = 0x9E3779B97F4A7C15ULL
cdef double _INV53 = 1.0 / 9007199254740992.0
cdef u64 _MASK32 = 0xFFFFFFFFULL

# stage tags, mirroring graphonlab._rng
cdef u64 _STAGE_EDGE = 2
cdef u64 _STAGE_STEP = 3
cdef u64 _STAGE_ARRIVAL = 4
cdef u64 _STAGE_MARK = 5

cdef long long _BIG = 1LL << 62


cdef inline u64 _mix1(u64 z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline u64 _mix2(u64 z) nogil:
    z = (z ^ (z >> 33)) * 0xFF51AFD7ED558CCDULL
    z = (z ^ (z >> 33)) * 0xC4CEB9FE1A85EC53ULL
    return z ^ (z >> 33)


cdef inline u64 _base(u64 seed, u64 stage) nogil:
    return _mix1(seed * _GOLDEN + stage)


cdef inline u64 _word(u64 base, u64 a, u64 b) nogil:
    return _mix2(_mix1(base ^ (((a & _MASK32) << 32) | (b & _MASK32))))


cdef inline double _udraw(u64 base, u64 a, u64 b) nogil:
    return <double>(_word(base, a, b) >> 11) * _INV53


cdef u64 _useed(object seed):
    return <u64>(seed & 0xFFFFFFFFFFFFFFFF)


def draw_u64(object seed, object stage, object a, object b):
    """Raw word; exposed so tests can pin the stream against the reference."""
    return int(_word(_base(_useed(seed), _useed(stage)), _useed(a), _useed(b)))


# ---------------------------------------------------------------------------
# edge-generating stage


def pair_bernoulli_degrees(int code, double a0, mat_o, idx_o, pos_o, n_o, seed):
    cdef Py_ssize_t n = n_o
    cdef u64 base = _base(_useed(seed), _STAGE_EDGE)
    cdef u64 rowkey
    out = np.zeros(n, dtype=np.int64)
    cdef long long[::1] deg = out
    cdef double[:, ::1] mat
    cdef long long[::1] idx
    cdef double[::1] pos
    cdef double[::1] row
    cdef Py_ssize_t i, j
    cdef long long acc, hit
    cdef double p, u, xi, xj, lo, hi

    # verdicts are branch-free where possible: u < 0 is never true and
    # u < 1 always is, so clamped probabilities need no special casing
    if code == 0:
        if a0 >= 1.0:
            out[:] = n - 1
            return out
        if a0 <= 0.0:
            return out
        with nogil:
            for i in range(n - 1):
                rowkey = base ^ ((<u64>i) << 32)
                acc = 0
                for j in range(i + 1, n):
                    hit = <double>(_mix2(_mix1(rowkey ^ <u64>j)) >> 11) * _INV53 < a0
                    acc += hit
                    deg[j] += hit
                deg[i] += acc
    elif code == 1:
        mat = mat_o
        idx = idx_o
        with nogil:
            for i in range(n - 1):
                rowkey = base ^ ((<u64>i) << 32)
                row = mat[idx[i]]
                acc = 0
                for j in range(i + 1, n):
                    p = row[idx[j]]
                    u = <double>(_mix2(_mix1(rowkey ^ <u64>j)) >> 11) * _INV53
                    hit = u < p
                    acc += hit
                    deg[j] += hit
                deg[i] += acc
    elif code == 2:
        pos = pos_o
        with nogil:
            for i in range(n - 1):
                rowkey = base ^ ((<u64>i) << 32)
                xi = pos[i]
                acc = 0
                for j in range(i + 1, n):
                    p = xi * pos[j]
                    u = <double>(_mix2(_mix1(rowkey ^ <u64>j)) >> 11) * _INV53
                    hit = u < p
                    acc += hit
                    deg[j] += hit
                deg[i] += acc
    elif code == 3:
        pos = pos_o
        with nogil:
            for i in range(n - 1):
                rowkey = base ^ ((<u64>i) << 32)
                xi = pos[i]
                acc = 0
                for j in range(i + 1, n):
                    xj = pos[j]
                    lo = xi if xi < xj else xj
                    hi = xj if xi < xj else xi
                    p = 3.0 * lo
                    if p > 1.0:
                        p = 1.0
                    if hi < 0.5:
                        p = 0.0
                    elif lo >= 0.5:
                        p = 1.0
                    u = <double>(_mix2(_mix1(rowkey ^ <u64>j)) >> 11) * _INV53
                    hit = u < p
                    acc += hit
                    deg[j] += hit
                deg[i] += acc
    elif code == 4:
        pos = pos_o
        with nogil:
            for i in range(n - 1):
                xi = pos[i]
                acc = 0
                for j in range(i + 1, n):
                    xj = pos[j]
                    lo = xi if xi < xj else xj
                    hi = xj if xi < xj else xi
                    hit = hi <= 2.0 * lo
                    acc += hit
                    deg[j] += hit
                deg[i] += acc
    else:
        raise ValueError(f"unknown pair-probability code {code}")
    return out


def pair_bernoulli_edges(int code, double a0, mat_o, idx_o, pos_o, n_o, seed):
    cdef Py_ssize_t n = n_o
    cdef u64 base = _base(_useed(seed), _STAGE_EDGE)
    cdef double[:, ::1] mat
    cdef long long[::1] idx
    cdef double[::1] pos
    cdef Py_ssize_t i, j, count = 0, cap = 4096
    cdef double p, xi, xj, lo, hi
    heads_a = np.empty(cap, dtype=np.int32)
    tails_a = np.empty(cap, dtype=np.int32)
    cdef int[::1] heads = heads_a
    cdef int[::1] tails = tails_a
    cdef bint hit

    if code == 1:
        mat = mat_o
        idx = idx_o
    elif code in (2, 3, 4):
        pos = pos_o

    for i in range(n - 1):
        xi = pos[i] if code >= 2 else 0.0
        for j in range(i + 1, n):
            if code == 0:
                p = a0
                hit = p >= 1.0 or (p > 0.0 and _udraw(base, i, j) < p)
            elif code == 1:
                p = mat[idx[i], idx[j]]
                hit = p >= 1.0 or (p > 0.0 and _udraw(base, i, j) < p)
            else:
                xj = pos[j]
                if xi < xj:
                    lo = xi
                    hi = xj
                else:
                    lo = xj
                    hi = xi
                if code == 2:
                    p = xi * xj
                    hit = p >= 1.0 or (p > 0.0 and _udraw(base, i, j) < p)
                elif code == 3:
                    if hi < 0.5:
                        hit = False
                    elif lo >= 0.5:
                        hit = True
                    else:
                        p = 3.0 * lo
                        hit = p >= 1.0 or _udraw(base, i, j) < p
                else:
                    hit = hi <= 2.0 * lo
            if hit:
                if count == cap:
                    cap *= 2
                    heads_a = np.resize(heads_a, cap)
                    tails_a = np.resize(tails_a, cap)
                    heads = heads_a
                    tails = tails_a
                heads[count] = <int>i
                tails[count] = <int>j
                count += 1
    return heads_a[:count].copy(), tails_a[:count].copy()


# ---------------------------------------------------------------------------
# incremental edge process


cdef inline Py_ssize_t _fen_find(double[::1] tree, Py_ssize_t m,
                                 Py_ssize_t top_bit, double target) nogil:
    cdef Py_ssize_t pos = 0, bit = top_bit, nxt
    cdef double rem = target
    while bit:
        nxt = pos + bit
        if nxt <= m and tree[nxt] <= rem:
            rem -= tree[nxt]
            pos = nxt
        bit >>= 1
    return pos


cdef inline void _fen_add(double[::1] tree, Py_ssize_t m,
                          Py_ssize_t i0, double delta) nogil:
    cdef Py_ssize_t i = i0 + 1
    while i <= m:
        tree[i] += delta
        i += i & (-i)


cdef inline int _dsu_find(int[::1] parent, int x) nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def incremental_run(n_o, w_o, seed, max_k_o, fill_o):
    cdef Py_ssize_t n = n_o
    cdef Py_ssize_t max_k = max_k_o
    cdef bint fill = fill_o
    cdef Py_ssize_t m = n * (n - 1) // 2
    w_a = np.array(w_o, dtype=np.float64, copy=True)
    cdef double[::1] w = w_a
    cdef u64 base = _base(_useed(seed), _STAGE_STEP)

    tree_a = np.zeros(m + 1, dtype=np.float64)
    cdef double[::1] tree = tree_a
    picked_a = np.zeros(m, dtype=np.uint8)
    cdef unsigned char[::1] picked = picked_a
    cdef Py_ssize_t i, j, t, pid, k
    cdef double total = 0.0, u, delta
    cdef Py_ssize_t visible = 0

    for i in range(1, m + 1):
        tree[i] += w[i - 1]
        j = i + (i & (-i))
        if j <= m:
            tree[j] += tree[i]
    cdef Py_ssize_t top_bit = 1
    while top_bit * 2 <= m:
        top_bit *= 2
    for i in range(m):
        total += w[i]
        if w[i] > 0.0:
            visible += 1

    row_start_a = np.zeros(n + 1, dtype=np.int64)
    cdef long long[::1] row_start = row_start_a
    for i in range(n):
        row_start[i + 1] = row_start[i] + (n - 1 - i)

    order_i_a = np.empty(m, dtype=np.int32)
    order_j_a = np.empty(m, dtype=np.int32)
    cdef int[::1] order_i = order_i_a
    cdef int[::1] order_j = order_j_a
    deg_a = np.zeros(n, dtype=np.int64)
    cdef long long[::1] deg = deg_a
    below_a = np.zeros(max_k + 1, dtype=np.int64)
    cdef long long[::1] below = below_a
    for k in range(1, max_k + 1):
        below[k] = n
    hit_min_a = np.full(max_k + 1, -1, dtype=np.int64)
    cdef long long[::1] hit_min = hit_min_a
    hit_min[0] = 0
    parent_a = np.arange(n, dtype=np.int32)
    cdef int[::1] parent = parent_a
    cdef Py_ssize_t components = n
    cdef long long conn1 = -1, exhausted = -1
    cdef Py_ssize_t steps_done = m
    cdef Py_ssize_t rem_len = 0
    remaining_a = None
    cdef long long[::1] remaining = None
    cdef Py_ssize_t lo, hi, mid, d
    cdef int ri, rj

    for t in range(1, m + 1):
        u = _udraw(base, t, 0)
        if visible > 0:
            pid = _fen_find(tree, m, top_bit, u * total)
            if pid >= m:
                pid = m - 1
            while w[pid] <= 0.0:
                pid += 1
                if pid == m:
                    pid = 0
            delta = w[pid]
            _fen_add(tree, m, pid, -delta)
            total -= delta
            w[pid] = 0.0
            visible -= 1
        else:
            if exhausted < 0:
                exhausted = t
                if not fill:
                    steps_done = t - 1
                    break
                remaining_a = np.nonzero(picked_a == 0)[0].astype(np.int64)
                remaining = remaining_a
                rem_len = remaining_a.shape[0]
            k = <Py_ssize_t>(u * rem_len)
            if k >= rem_len:
                k = rem_len - 1
            pid = remaining[k]
            remaining[k] = remaining[rem_len - 1]
            rem_len -= 1
        picked[pid] = 1
        # unpair: last row i with row_start[i] <= pid
        lo = 0
        hi = n - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if row_start[mid] <= pid:
                lo = mid
            else:
                hi = mid - 1
        i = lo
        j = pid - row_start[i] + i + 1
        order_i[t - 1] = <int>i
        order_j[t - 1] = <int>j
        deg[i] += 1
        d = deg[i]
        if d <= max_k:
            below[d] -= 1
            if below[d] == 0 and hit_min[d] < 0:
                hit_min[d] = t
        deg[j] += 1
        d = deg[j]
        if d <= max_k:
            below[d] -= 1
            if below[d] == 0 and hit_min[d] < 0:
                hit_min[d] = t
        ri = _dsu_find(parent, <int>i)
        rj = _dsu_find(parent, <int>j)
        if ri != rj:
            parent[ri] = rj
            components -= 1
            if components == 1 and conn1 < 0:
                conn1 = t
    return (order_i_a[:steps_done], order_j_a[:steps_done], hit_min_a,
            int(conn1), int(exhausted))


# ---------------------------------------------------------------------------
# sparse K-connectivity certificate + unit-capacity flows


def ni_certificate(n_o, indptr_o, indices_o, k_o):
    cdef Py_ssize_t n = n_o
    cdef Py_ssize_t k = k_o
    indptr_a = np.ascontiguousarray(indptr_o, dtype=np.int64)
    indices_a = np.ascontiguousarray(indices_o, dtype=np.int32)
    cdef long long[::1] indptr = indptr_a
    cdef int[::1] indices = indices_a
    cdef Py_ssize_t m = indices_a.shape[0] // 2

    r_a = np.zeros(n, dtype=np.int64)
    cdef long long[::1] r = r_a
    scanned_a = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] scanned = scanned_a

    # bucket stacks as linked lists over a push arena (n initial + <= m pushes)
    cdef Py_ssize_t arena = n + m + 1
    bucket_head_a = np.full(n + 1, -1, dtype=np.int64)
    cdef long long[::1] bucket_head = bucket_head_a
    ent_v_a = np.empty(arena, dtype=np.int32)
    ent_next_a = np.empty(arena, dtype=np.int64)
    cdef int[::1] ent_v = ent_v_a
    cdef long long[::1] ent_next = ent_next_a
    cdef Py_ssize_t n_ent = 0, cur = 0, done = 0, e
    cdef int v, w, cand
    cdef Py_ssize_t p

    for v in range(n - 1, -1, -1):  # so vertex 0 pops first
        ent_v[n_ent] = v
        ent_next[n_ent] = bucket_head[0]
        bucket_head[0] = n_ent
        n_ent += 1

    heads_a = np.empty(k * n, dtype=np.int32)
    tails_a = np.empty(k * n, dtype=np.int32)
    cdef int[::1] heads = heads_a
    cdef int[::1] tails = tails_a
    cdef Py_ssize_t kept = 0

    while done < n:
        while True:
            while cur > 0 and bucket_head[cur] < 0:
                cur -= 1
            e = bucket_head[cur]
            bucket_head[cur] = ent_next[e]
            cand = ent_v[e]
            if scanned[cand] == 0 and r[cand] == cur:
                v = cand
                break
        scanned[v] = 1
        done += 1
        for p in range(indptr[v], indptr[v + 1]):
            w = indices[p]
            if scanned[w] == 0:
                if r[w] < k:
                    heads[kept] = v
                    tails[kept] = w
                    kept += 1
                r[w] += 1
                ent_v[n_ent] = w
                ent_next[n_ent] = bucket_head[r[w]]
                bucket_head[r[w]] = n_ent
                n_ent += 1
                if r[w] > cur:
                    cur = r[w]
    return heads_a[:kept].copy(), tails_a[:kept].copy()


cdef class _SplitFlow:
    """Unit vertex capacities via node splitting: in(v)=v, out(v)=v+n."""

    cdef Py_ssize_t n, n_arcs
    cdef int[::1] to
    cdef long long[::1] head, nxt
    cdef signed char[::1] cap0, cap
    cdef int[::1] prev
    cdef int[::1] queue

    def __init__(self, n, heads, tails):
        cdef Py_ssize_t m = len(heads)
        self.n = n
        self.n_arcs = 2 * (n + 2 * m)
        to_a = np.empty(self.n_arcs, dtype=np.int32)
        nxt_a = np.empty(self.n_arcs, dtype=np.int64)
        head_a = np.full(2 * n, -1, dtype=np.int64)
        cap0_a = np.empty(self.n_arcs, dtype=np.int8)
        self.to = to_a
        self.nxt = nxt_a
        self.head = head_a
        self.cap0 = cap0_a
        self.cap = np.empty(self.n_arcs, dtype=np.int8)
        self.prev = np.empty(2 * n, dtype=np.int32)
        self.queue = np.empty(2 * n, dtype=np.int32)
        cdef Py_ssize_t cnt = 0
        cdef Py_ssize_t v, i
        for v in range(n):
            cnt = self._arc(cnt, v, v + n, 1)
        h_arr = np.asarray(heads)
        t_arr = np.asarray(tails)
        for i in range(m):
            cnt = self._arc(cnt, int(h_arr[i]) + n, int(t_arr[i]), 1)
            cnt = self._arc(cnt, int(t_arr[i]) + n, int(h_arr[i]), 1)

    cdef Py_ssize_t _arc(self, Py_ssize_t cnt, Py_ssize_t u, Py_ssize_t v, int c):
        self.to[cnt] = <int>v
        self.cap0[cnt] = <signed char>c
        self.nxt[cnt] = self.head[u]
        self.head[u] = cnt
        cnt += 1
        self.to[cnt] = <int>u
        self.cap0[cnt] = 0
        self.nxt[cnt] = self.head[v]
        self.head[v] = cnt
        return cnt + 1

    def atleast(self, x_o, y_o, k_o):
        cdef Py_ssize_t x = x_o, y = y_o, k = k_o
        cdef Py_ssize_t s = x + self.n, t = y, nn = 2 * self.n
        cdef Py_ssize_t it, qh, qt, u, v
        cdef long long e
        cdef bint found
        cdef Py_ssize_t i
        for i in range(self.n_arcs):
            self.cap[i] = self.cap0[i]
        for it in range(k):
            for i in range(nn):
                self.prev[i] = -1
            self.prev[s] = -2
            self.queue[0] = <int>s
            qh = 0
            qt = 1
            found = False
            while qh < qt and not found:
                u = self.queue[qh]
                qh += 1
                e = self.head[u]
                while e != -1:
                    v = self.to[e]
                    if self.cap[e] > 0 and self.prev[v] == -1:
                        self.prev[v] = <int>e
                        if v == t:
                            found = True
                            break
                        self.queue[qt] = <int>v
                        qt += 1
                    e = self.nxt[e]
            if not found:
                return False
            v = t
            while v != s:
                e = self.prev[v]
                self.cap[e] -= 1
                self.cap[e ^ 1] += 1
                v = self.to[e ^ 1]
        return True


def kconn_decide(n_o, indptr_o, indices_o, k_o):
    """Vertex connectivity >= k (k >= 2, n > k) on the sparse certificate."""
    cdef Py_ssize_t n = n_o
    cdef Py_ssize_t k = k_o
    heads, tails = ni_certificate(n_o, indptr_o, indices_o, k_o)
    both = np.concatenate([heads, tails])
    other = np.concatenate([tails, heads])
    order = np.argsort(both * np.int64(n) + other, kind="stable")
    hind_a = np.ascontiguousarray(other[order], dtype=np.int32)
    hptr_a = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(both, minlength=n), out=hptr_a[1:])
    degh = np.diff(hptr_a)
    if degh.min() < k:
        return False
    cdef Py_ssize_t v = int(np.argmin(degh))
    nbrs = hind_a[hptr_a[v] : hptr_a[v + 1]]
    in_nbr = np.zeros(n, dtype=bool)
    in_nbr[nbrs] = True
    flow = _SplitFlow(n, heads, tails)
    cdef Py_ssize_t u
    for u in range(n):
        if u != v and not in_nbr[u]:
            if not flow.atleast(v, u, k):
                return False
    cdef Py_ssize_t ai, bi
    cdef long long[::1] hptr = hptr_a
    cdef int[::1] hind = hind_a
    for ai in range(len(nbrs)):
        for bi in range(ai + 1, len(nbrs)):
            a, b = int(nbrs[ai]), int(nbrs[bi])
            row = hind_a[hptr_a[a] : hptr_a[a + 1]]
            pos = np.searchsorted(row, b)
            if pos < len(row) and row[pos] == b:
                continue
            if not flow.atleast(a, b, k):
                return False
    return True


# ---------------------------------------------------------------------------
# Poisson point process oracles


cdef inline long long _poisson_inv_capped(double s, double u, long long cap) nogil:
    cdef double pmf, cdf
    cdef long long y = 0
    if cap <= 0:
        return cap
    pmf = exp(-s)
    cdf = pmf
    while u > cdf:
        y += 1
        if y >= cap:
            return cap
        pmf *= s / y
        cdf += pmf
    return y


def oracle_ramp_min(reps_o, seed, double intensity, double horizon):
    cdef Py_ssize_t reps = reps_o
    cdef u64 seed_u = _useed(seed)
    cdef u64 base_arr = _base(seed_u, _STAGE_ARRIVAL)
    cdef u64 base_mark = _base(seed_u, _STAGE_MARK)
    out_a = np.empty(reps, dtype=np.int64)
    cdef long long[::1] out = out_a
    cdef Py_ssize_t rep
    cdef long long zmin, y
    cdef double s, u
    cdef u64 arr, pt
    with nogil:
        for rep in range(reps):
            zmin = _BIG
            s = 0.0
            arr = 0
            pt = 0
            while True:
                u = _udraw(base_arr, rep, arr)
                arr += 1
                s += -log(1.0 - u) / intensity
                if s > horizon and pt > 0:
                    break
                u = _udraw(base_mark, rep, pt)
                pt += 1
                y = _poisson_inv_capped(s, u, zmin)
                if y < zmin:
                    zmin = y
                if zmin == 0:
                    break
            out[rep] = zmin
    return out_a


def oracle_band_count(reps_o, seed):
    cdef Py_ssize_t reps = reps_o
    cdef u64 base_arr = _base(_useed(seed), _STAGE_ARRIVAL)
    out_a = np.empty(reps, dtype=np.int64)
    cdef long long[::1] out = out_a
    cdef Py_ssize_t rep
    cdef long long z
    cdef double s1, s, u
    cdef u64 arr
    with nogil:
        for rep in range(reps):
            u = _udraw(base_arr, rep, 0)
            s1 = -log(1.0 - u)
            s = s1
            arr = 1
            z = 0
            while True:
                u = _udraw(base_arr, rep, arr)
                arr += 1
                s += -log(1.0 - u)
                if s < 2.0 * s1:
                    z += 1
                else:
                    break
            out[rep] = z
    return out_a
