"""Independent oracles used by the tests.

These deliberately avoid the library's closed forms and algorithms: numeric
quadrature of pointwise evaluation, Monte Carlo estimates, and brute-force
graph procedures.  Expected values asserted in the tests were computed with
these and frozen.
"""

import itertools

import numpy as np


def quad_degree(model, x, resolution=10_000):
    """Midpoint-rule quadrature of evaluate(x, .) over [0, 1]."""
    ys = (np.arange(resolution) + 0.5) / resolution
    return float(np.mean(model.evaluate(np.full(resolution, float(x)), ys)))


def quad_density(model, resolution=2_000):
    """2-D midpoint quadrature of evaluate, row by row."""
    ys = (np.arange(resolution) + 0.5) / resolution
    acc = 0.0
    for x in ys:
        acc += float(np.mean(model.evaluate(np.full(resolution, x), ys)))
    return acc / resolution


def mc_tail_mass(model, alpha, samples, rng):
    """Monte Carlo estimate of the measure of {degree <= alpha}."""
    xs = rng.random(samples)
    return float(np.mean(np.asarray(model.degree(xs)) <= alpha))


def brute_vertex_connectivity_at_least(n, edges, k):
    """Delete every vertex subset of size < k and test connectivity."""
    adj = {v: set() for v in range(n)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)

    def connected_without(removed):
        verts = [v for v in range(n) if v not in removed]
        if not verts:
            return True
        seen = {verts[0]}
        stack = [verts[0]]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in removed and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(verts)

    for size in range(k):
        for sub in itertools.combinations(range(n), size):
            if not connected_without(set(sub)):
                return False
    return True


def brute_micro_macro(n, edges, gamma):
    """Enumerate every X subset of V and test for an edge-free cut with the
    snapped closed-interval size bounds."""
    micro_hi = int(np.floor(gamma * n + 1e-9))
    macro_lo = max(1, int(np.ceil(gamma * n - 1e-9)))
    macro_hi = n // 2
    cut_free = []
    edge_arr = list(edges)
    for mask in range(1, 1 << n):
        ok = True
        for a, b in edge_arr:
            if ((mask >> a) & 1) != ((mask >> b) & 1):
                ok = False
                break
        if ok:
            cut_free.append(bin(mask).count("1"))
    micro = any(1 <= s <= micro_hi for s in cut_free if s < n)
    macro = any(macro_lo <= s <= macro_hi for s in cut_free if s < n)
    return micro, macro


def random_graph(rng, n, p):
    return [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
