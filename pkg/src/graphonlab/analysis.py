"""Deterministic graph statistics: degrees, components, vertex connectivity
and the micro/macro disconnection predicates.

Vertex connectivity >= K is decided by unit-vertex-capacity max-flow with
the classic pinned-vertex pair reduction: flows from one fixed vertex to
each of its non-neighbors, plus flows between non-adjacent pairs of its
neighbors.  Flows run on a sparse K-connectivity certificate (union of K
scan-first-search forests), which preserves the K-connectivity verdict
while cutting the flow graphs to at most K*n edges; the certificate-based
decision is validated against brute-force vertex deletion in the test
suite.

A set X with no edges to its complement is necessarily a union of
connected components, so the micro predicate reduces to the smallest
component size and the macro predicate to a subset-sum over component
sizes.  That reformulation is exact and makes both predicates polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .graphons import DomainError
from .sampling import SampledGraph

__all__ = [
    "GraphStats",
    "degree_stats",
    "components",
    "vertex_connectivity_at_least",
    "vertex_connectivity",
    "micro_macro_disconnected",
    "stats_json",
]


@dataclass
class GraphStats:
    min_degree: int
    isolated_count: int
    component_sizes: list  # sorted descending, sums to n
    vertex_connectivity: int | None = None  # filled on demand


def components(graph: SampledGraph) -> list:
    """Connected component sizes, sorted descending."""
    parent = list(range(graph.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in zip(graph.heads.tolist(), graph.tails.tolist()):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    counts = {}
    for v in range(graph.n):
        r = find(v)
        counts[r] = counts.get(r, 0) + 1
    return sorted(counts.values(), reverse=True)


def degree_stats(graph: SampledGraph) -> GraphStats:
    deg = graph.degrees()
    return GraphStats(
        min_degree=int(deg.min()),
        isolated_count=int((deg == 0).sum()),
        component_sizes=components(graph),
    )


def vertex_connectivity_at_least(graph: SampledGraph, k: int) -> bool:
    """True iff the vertex connectivity of graph is at least k."""
    k = int(k)
    if k < 1:
        raise DomainError("k must be at least 1")
    if graph.n <= k:
        raise DomainError("k-connectivity needs more than k vertices")
    if k == 1:
        return len(components(graph)) == 1
    if graph.num_edges == 0 or int(graph.degrees().min()) < k:
        return False
    indptr, indices = graph.csr()
    return bool(kernels.kconn_decide(graph.n, indptr, indices, k))


def vertex_connectivity(graph: SampledGraph) -> int:
    """Exact vertex connectivity; linear scan over k, so meant for small
    graphs and invariant checks (kappa <= delta caps the scan)."""
    if graph.n < 2:
        return 0
    delta = int(graph.degrees().min())
    kappa = 0
    for k in range(1, min(delta, graph.n - 1) + 1):
        if vertex_connectivity_at_least(graph, k):
            kappa = k
        else:
            break
    assert kappa <= delta
    return kappa


def _snap_floor(x: float) -> int:
    return int(np.floor(x + 1e-9))


def _snap_ceil(x: float) -> int:
    return int(np.ceil(x - 1e-9))


def micro_macro_disconnected(graph: SampledGraph, gamma: float):
    """(micro, macro): existence of an edge-free cut X with |X| in
    [1, gamma*n], respectively [gamma*n, n/2].  Interval endpoints snap to
    the nearest integer bound (closed intervals, weak inequalities)."""
    gamma = float(gamma)
    if not 0.0 < gamma <= 0.5:
        raise DomainError("gamma must lie in (0, 1/2]")
    n = graph.n
    sizes = components(graph)
    micro_cap = _snap_floor(gamma * n)
    micro = len(sizes) > 1 and min(sizes) <= micro_cap
    lo = max(1, _snap_ceil(gamma * n))
    hi = n // 2
    if lo > hi or len(sizes) == 1:
        return micro, False
    reachable = 1  # bitset over achievable union-of-component sizes
    for s in sizes:
        reachable |= reachable << s
    window = (reachable >> lo) & ((1 << (hi - lo + 1)) - 1)
    return micro, window != 0


def stats_json(graph: SampledGraph, gamma: float | None = None) -> dict:
    """Flat per-graph record for CSV/JSON emission."""
    st = degree_stats(graph)
    doc = {
        "n": graph.n,
        "edges": graph.num_edges,
        "min_degree": st.min_degree,
        "isolated_count": st.isolated_count,
        "num_components": len(st.component_sizes),
        "largest_component": st.component_sizes[0] if st.component_sizes else 0,
    }
    if gamma is not None:
        micro, macro = micro_macro_disconnected(graph, gamma)
        doc["micro_disconnected"] = micro
        doc["macro_disconnected"] = macro
    return doc
