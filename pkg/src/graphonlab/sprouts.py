"""Sprout calculus in exact rational arithmetic.

A sprout is a finite weighted graph on nonnegative integer vertices in
which every non-origin vertex satisfies flow reduction: the total weight on
edges to smaller vertices is at least three times the total weight on edges
to larger vertices.  The origin is the smallest vertex; the flow into a
sprout is three times the weight incident to the origin, and the total
weight of any sprout is at most half its flow.

``cover_decompose`` splits a sprout along its origin-neighbors: it
repeatedly takes the smallest origin-neighbor h with positive weight,
extracts a sub-sprout rooted at h by a potential-driven sweep over the
vertices above h (each vertex may pass on at most a third of what it has
received), removes h, and recurses on the remainder.  The resulting family
is a cover: member flows are dominated by the origin-edge weights and all
weight off the origin is conserved across members.

Everything here uses ``fractions.Fraction``; the inequalities are exact and
are checked with zero tolerance.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .graphons import DomainError

__all__ = [
    "Sprout",
    "FlowReductionViolation",
    "SproutStats",
    "validate_sprout",
    "sprout_stats",
    "cover_decompose",
    "verify_cover",
    "CoverReport",
    "random_sprout",
    "sprout_to_json",
    "sprout_from_json",
]


def _norm_edges(edges) -> dict:
    out = {}
    items = edges.items() if isinstance(edges, dict) else edges
    for entry in items:
        if isinstance(edges, dict):
            (a, b), w = entry
        else:
            a, b, w = entry
        a, b = int(a), int(b)
        if a == b:
            raise DomainError("sprout edges must join distinct vertices")
        if a > b:
            a, b = b, a
        w = Fraction(w)
        if w < 0:
            raise DomainError("sprout weights must be nonnegative")
        if (a, b) in out:
            raise DomainError(f"duplicate edge {(a, b)}")
        out[(a, b)] = w
    return out


@dataclass(frozen=True)
class Sprout:
    """Weighted graph satisfying flow reduction at every non-origin vertex;
    construct via validate_sprout, which checks the condition."""

    vertices: tuple
    edges: dict

    @property
    def origin(self) -> int:
        return self.vertices[0]

    def weight(self, a, b) -> Fraction:
        if a > b:
            a, b = b, a
        return self.edges.get((a, b), Fraction(0))

    def down_sum(self, v) -> Fraction:
        return sum(
            (w for (a, b), w in self.edges.items() if b == v), Fraction(0)
        )

    def up_sum(self, v) -> Fraction:
        return sum(
            (w for (a, b), w in self.edges.items() if a == v), Fraction(0)
        )


@dataclass(frozen=True)
class FlowReductionViolation:
    """First vertex violating flow reduction, with both side sums."""

    vertex: int
    down_sum: Fraction
    up_sum: Fraction

    def __str__(self):
        return (
            f"flow reduction fails at vertex {self.vertex}: "
            f"{self.down_sum} < 3 * {self.up_sum}"
        )


def _flow_reduction_violation(vertices, edges):
    """First vertex violating flow reduction, or None; inputs normalized."""
    down = dict.fromkeys(vertices, 0)
    up = dict.fromkeys(vertices, 0)
    for (a, b), w in edges.items():
        up[a] += w
        down[b] += w
    for v in vertices[1:]:
        if down[v] < 3 * up[v]:
            return FlowReductionViolation(v, Fraction(down[v]), Fraction(up[v]))
    return None


def validate_sprout(vertices, edges):
    """Return a Sprout, or the first FlowReductionViolation in vertex order."""
    vertices = tuple(sorted(set(int(v) for v in vertices)))
    if not vertices:
        raise DomainError("sprout needs at least one vertex")
    if vertices[0] < 0:
        raise DomainError("sprout vertices are nonnegative integers")
    edges = _norm_edges(edges)
    vset = set(vertices)
    for a, b in edges:
        if a not in vset or b not in vset:
            raise DomainError(f"edge {(a, b)} leaves the vertex set")
    violation = _flow_reduction_violation(vertices, edges)
    if violation is not None:
        return violation
    return Sprout(vertices, edges)


@dataclass(frozen=True)
class SproutStats:
    origin: int
    flow: Fraction  # 3x the weight incident to the origin
    total: Fraction
    depth: int


def sprout_stats(s: Sprout) -> SproutStats:
    o = s.origin
    flow = 3 * sum((w for (a, b), w in s.edges.items() if a == o or b == o), Fraction(0))
    total = sum(s.edges.values(), Fraction(0))
    return SproutStats(o, flow, total, s.vertices[-1] - o)


def _origin_neighbors(s: Sprout):
    o = s.origin
    return sorted(b for (a, b) in s.edges if a == o)


def _extract_branch(s: Sprout, h: int) -> Sprout:
    """Sub-sprout rooted at h via the potential sweep over vertices >= h.

    The potential of h is a third of its origin-edge weight; the potential
    of any later vertex is a third of the weight already assigned to it.
    Batch assignments at each active vertex take as much of the available
    up-weight as the potential allows, greedily on the smallest target
    first (the tie-break fixed for determinism).  Vertices and edges that
    end up carrying no weight are trimmed.
    """
    above = [v for v in s.vertices if v >= h]
    up_adj = {}
    for (a, b), w in s.edges.items():
        if a >= h and w > 0:  # b > a, so both endpoints sit above h
            up_adj.setdefault(a, []).append(b)
    assigned = {}
    received = {v: Fraction(0) for v in above}
    for i in above:
        p = s.weight(s.origin, h) / 3 if i == h else received[i] / 3
        targets = sorted(up_adj.get(i, ()))
        if p <= 0 or not targets:
            continue
        avail = sum((s.edges[(i, j)] for j in targets), Fraction(0))
        budget = min(p, avail)
        for j in targets:
            take = min(s.edges[(i, j)], budget)
            if take > 0:
                assigned[(i, j)] = take
                received[j] += take
                budget -= take
    keep = {h}
    for a, b in assigned:
        keep.add(a)
        keep.add(b)
    return Sprout(tuple(sorted(keep)), assigned)


def _subtract_branch(s: Sprout, h: int, branch: Sprout) -> Sprout:
    verts = tuple(v for v in s.vertices if v != h)
    edges = {}
    for (a, b), w in s.edges.items():
        if a == h or b == h:
            continue
        taken = branch.edges.get((a, b))
        edges[(a, b)] = w - taken if taken is not None else w
    return Sprout(verts, edges)


def cover_decompose(s: Sprout) -> dict:
    """Cover of s indexed by its origin-neighbors.

    Zero-weight origin-edges contribute trivial single-vertex sprouts.
    Every extracted branch and every interior remainder is re-checked for
    flow reduction, so a construction bug surfaces here rather than as a
    silently broken cover.
    """
    family = {}
    current = s
    origin = s.origin
    pending = [h for h in _origin_neighbors(s) if s.edges[(origin, h)] > 0]
    for h in pending:  # origin-edge weights never change during extraction
        branch = _extract_branch(current, h)
        bad = _flow_reduction_violation(branch.vertices, branch.edges)
        if bad is not None:
            raise AssertionError(f"extracted branch is not a sprout: {bad}")
        remainder = _subtract_branch(current, h, branch)
        bad = _flow_reduction_violation(remainder.vertices, remainder.edges)
        if bad is not None:
            raise AssertionError(f"remainder is not a sprout: {bad}")
        family[h] = branch
        current = remainder
    for h in _origin_neighbors(s):
        if h not in family:
            family[h] = Sprout((h,), {})
    return family


@dataclass(frozen=True)
class CoverReport:
    ok: bool
    failure: str | None = None

    def __bool__(self):
        return self.ok


def verify_cover(s: Sprout, family: dict) -> CoverReport:
    """Check every cover clause exactly; reports the first failure."""
    o = s.origin
    expected = set(_origin_neighbors(s))
    if set(family) != expected:
        return CoverReport(False, f"family keys {sorted(family)} != origin-neighbors {sorted(expected)}")
    vset = set(s.vertices)
    for ell, member in sorted(family.items()):
        if not set(member.vertices) <= vset:
            return CoverReport(False, f"member {ell} has vertices outside the host")
        for e in member.edges:
            if e not in s.edges:
                return CoverReport(False, f"member {ell} has edge {e} not in the host")
        if member.origin != ell:
            return CoverReport(False, f"member {ell} has origin {member.origin}")
        bad = _flow_reduction_violation(member.vertices, member.edges)
        if bad is not None:
            return CoverReport(False, f"member {ell}: {bad}")
        if sprout_stats(member).flow > s.weight(o, ell):
            return CoverReport(False, f"member {ell} flow exceeds its origin-edge weight")
    covered = {}
    for member in family.values():
        for e, w in member.edges.items():
            covered[e] = covered.get(e, 0) + w
    for (a, b), w in s.edges.items():
        if a == o or b == o:
            continue
        if covered.get((a, b), 0) != w:
            return CoverReport(False, f"edge {(a, b)} weight {w} != covered {covered.get((a, b), 0)}")
    return CoverReport(True)


def sprout_to_json(s: Sprout) -> dict:
    """Vertex list plus (i, j, "p/q") edge triples; exact round-trip."""
    edges = [
        [a, b, f"{w.numerator}/{w.denominator}"] for (a, b), w in sorted(s.edges.items())
    ]
    return {"vertices": list(s.vertices), "edges": edges}


def sprout_from_json(doc: dict) -> Sprout:
    edges = {(int(a), int(b)): Fraction(w) for a, b, w in doc["edges"]}
    out = validate_sprout(doc["vertices"], edges)
    if not isinstance(out, Sprout):
        raise DomainError(f"document does not describe a sprout: {out}")
    return out


def random_sprout(seed: int, max_vertices: int = 50) -> Sprout:
    """Test generator: weights built from the top vertex downward so flow
    reduction holds by construction (each vertex's down-edges are assigned
    three times its already-fixed up-weight plus random slack)."""
    rng = random.Random(seed)
    size = rng.randint(1, max_vertices)
    top = rng.randint(size, 3 * size)
    vertices = tuple(sorted(rng.sample(range(top + 1), size)))
    edges = {}
    # topology: one down-edge per non-origin vertex plus a few extras
    for k in range(1, size):
        lower = vertices[rng.randrange(k)]
        edges[(lower, vertices[k])] = Fraction(0)
    for _ in range(rng.randint(0, size)):
        a, b = rng.sample(range(size), 2) if size >= 2 else (0, 0)
        if a == b:
            continue
        a, b = min(a, b), max(a, b)
        edges.setdefault((vertices[a], vertices[b]), Fraction(0))
    for k in range(size - 1, 0, -1):
        v = vertices[k]
        up = sum((w for (a, b), w in edges.items() if a == v), Fraction(0))
        need = 3 * up + Fraction(rng.randint(0, 24), rng.randint(1, 8))
        down_edges = sorted((a, b) for (a, b) in edges if b == v)
        shares = [Fraction(rng.randint(0, 8), rng.randint(1, 6)) for _ in down_edges]
        base = sum(shares, Fraction(0))
        for (a, b), share in zip(down_edges, shares):
            if base > 0:
                edges[(a, b)] += need * share / base
            else:
                edges[(a, b)] += need if (a, b) == down_edges[0] else 0
    out = validate_sprout(vertices, edges)
    assert isinstance(out, Sprout), out
    return out
