"""The weighted edge-incremental graph process with hitting times.

Starting from the edgeless graph on n vertices with fixed latent
coordinates, each step adds one missing pair, drawn with probability
proportional to its model value among the visible pairs (positive value,
not yet an edge); the draw uses a Fenwick tree over pair weights, so each
step costs O(log n^2).  Once no visible pair remains the process either
fills in the remaining pairs uniformly at random (default) or freezes,
depending on exhausted_mode.

Hitting times are tracked for minimum degree >= K by O(1) incremental
counting, and for K-connectivity: K=1 by an incrementally maintained
union-find inside the process loop, K>=2 by replaying the edge order and
testing connectivity only from the first step where it can hold (the
minimum degree bounds connectivity from above, so earlier checks are
pointless and the expensive test runs a handful of times per trace).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from ._kernels_py import _pair_probs_row
from .analysis import vertex_connectivity_at_least
from .graphons import DomainError, Graphon
from .sampling import LatentSample, SampledGraph, sample_latents

__all__ = ["IncrementalTrace", "incremental_process"]


@dataclass
class IncrementalTrace:
    """Edge order plus first hitting steps (1-based edge counts).

    hit_min_deg[K] is the first t with min degree of G^t >= K; hit_conn[K]
    the first t with vertex connectivity >= K.  Entries are None when the
    property was never reached (possible only in freeze mode).
    visible_exhausted_at is the first step whose visible set was empty.
    """

    n: int
    seed: int
    max_k: int
    latents: LatentSample
    order_heads: np.ndarray
    order_tails: np.ndarray
    hit_min_deg: dict
    hit_conn: dict
    visible_exhausted_at: int | None
    exhausted_mode: str

    @property
    def num_steps(self) -> int:
        return len(self.order_heads)

    def graph_at(self, t: int) -> SampledGraph:
        """The graph after the first t edges."""
        return SampledGraph(
            self.n, self.order_heads[:t].copy(), self.order_tails[:t].copy()
        )


def _pair_weights(graphon: Graphon, coords, n: int) -> np.ndarray:
    code, a0, mat, idx, pos = graphon.pair_spec(coords)
    w = np.empty(n * (n - 1) // 2, dtype=np.float64)
    start = 0
    for i in range(n - 1):
        j_arr = np.arange(i + 1, n, dtype=np.int64)
        w[start : start + len(j_arr)] = _pair_probs_row(code, a0, mat, idx, pos, i, j_arr)
        start += len(j_arr)
    return w


def incremental_process(
    graphon: Graphon,
    n: int,
    seed: int,
    max_k: int = 1,
    exhausted_mode: str = "fill",
) -> IncrementalTrace:
    """Run the process to the complete graph (or to exhaustion in freeze
    mode) and record hitting times for K = 1..max_k."""
    if n < 2:
        raise DomainError("need n >= 2")
    if not 1 <= max_k <= n - 1:
        raise DomainError("need 1 <= max_k <= n - 1")
    if exhausted_mode not in ("fill", "freeze"):
        raise DomainError("exhausted_mode must be 'fill' or 'freeze'")

    latents = sample_latents(graphon, n, seed)
    w = _pair_weights(graphon, latents.coords, n)
    order_i, order_j, hit_min_arr, conn1, exhausted = kernels.incremental_run(
        n, w, seed, max_k, exhausted_mode == "fill"
    )

    hit_min = {}
    for k in range(1, max_k + 1):
        hit_min[k] = int(hit_min_arr[k]) if hit_min_arr[k] >= 0 else None
    hit_conn = {1: int(conn1) if conn1 >= 0 else None}

    for k in range(2, max_k + 1):
        prev = hit_conn[k - 1]
        if hit_min[k] is None or prev is None:
            hit_conn[k] = None
            continue
        t = max(hit_min[k], prev)
        found = None
        while t <= len(order_i):
            g = SampledGraph(n, order_i[:t], order_j[:t])
            if vertex_connectivity_at_least(g, k):
                found = t
                break
            t += 1
        hit_conn[k] = found

    for k in range(1, max_k + 1):
        if hit_conn[k] is not None and hit_min[k] is not None:
            assert hit_conn[k] >= hit_min[k]  # kappa <= delta

    return IncrementalTrace(
        n=n,
        seed=seed,
        max_k=max_k,
        latents=latents,
        order_heads=order_i,
        order_tails=order_j,
        hit_min_deg=hit_min,
        hit_conn=hit_conn,
        visible_exhausted_at=int(exhausted) if exhausted >= 0 else None,
        exhausted_mode=exhausted_mode,
    )
