"""Two-stage samplers for graphon and kernel random graphs.

Generation is the classic two-stage scheme: first sample n latent
coordinates i.i.d. from the model's latent measure (the vertex-generating
stage), then flip one independent Bernoulli coin per unordered pair with
success probability given by the model at the pair's coordinates (the
edge-generating stage).  Kernels rescale values by ln(n)/n and clamp at 1.

All randomness is counter-based (see graphonlab._rng): the coin for pair
(i, j) is a pure function of (seed, i, j), so identical (model, n, seed)
reproduce identical graphs byte for byte and edge verdicts never depend on
evaluation order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from ._rng import latent_uniforms
from .graphons import DomainError, Graphon, Kernel, model_from_json

__all__ = [
    "LatentSample",
    "SampledGraph",
    "sample_latents",
    "sample_rg",
    "sample_rk",
    "degrees_rg",
    "degrees_rk",
]


@dataclass(frozen=True)
class LatentSample:
    """Latent coordinates of the vertex-generating stage.

    coords holds floats in [0,1] for interval variants and block indices
    for step variants.
    """

    n: int
    coords: np.ndarray
    seed: int
    kind: str  # "interval" | "blocks"


def sample_latents(model, n: int, seed: int) -> LatentSample:
    if n < 1:
        raise DomainError("n must be at least 1")
    u = latent_uniforms(seed, n)
    if model.latent_kind == "blocks":
        cum = np.cumsum(model.measures)
        coords = np.minimum(
            np.searchsorted(cum, u, side="right"), model.n_blocks - 1
        ).astype(np.int64)
        return LatentSample(n, coords, seed, "blocks")
    return LatentSample(n, u, seed, "interval")


@dataclass
class SampledGraph:
    """Simple graph plus the latent coordinates and model that produced it.

    Edges are stored as parallel head/tail arrays with head < tail; sorted
    neighbor lists (CSR) and a packed pair-membership bitset for O(1) edge
    queries are built lazily.
    """

    n: int
    heads: np.ndarray
    tails: np.ndarray
    latents: LatentSample | None = None
    model: dict | None = None
    seed: int | None = None
    _csr: tuple | None = field(default=None, repr=False)
    _degrees: np.ndarray | None = field(default=None, repr=False)
    _bitset: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def from_edges(cls, n, pairs) -> "SampledGraph":
        pairs = list(pairs)
        heads = np.array([min(p) for p in pairs], dtype=np.int32)
        tails = np.array([max(p) for p in pairs], dtype=np.int32)
        return cls(n, heads, tails)

    @property
    def num_edges(self) -> int:
        return len(self.heads)

    def degrees(self) -> np.ndarray:
        if self._degrees is None:
            deg = np.bincount(self.heads, minlength=self.n) + np.bincount(
                self.tails, minlength=self.n
            )
            self._degrees = deg.astype(np.int64)
        return self._degrees

    def csr(self):
        """(indptr int64, indices int32) with each neighbor list sorted."""
        if self._csr is None:
            src = np.concatenate([self.heads, self.tails])
            dst = np.concatenate([self.tails, self.heads])
            order = np.lexsort((dst, src))
            indices = np.ascontiguousarray(dst[order], dtype=np.int32)
            counts = np.bincount(src, minlength=self.n)
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            np.cumsum(counts, out=indptr[1:])
            self._csr = (indptr, indices)
        return self._csr

    def neighbors(self, i) -> np.ndarray:
        indptr, indices = self.csr()
        return indices[indptr[i] : indptr[i + 1]]

    def has_edge(self, i, j) -> bool:
        if i == j:
            return False
        if i > j:
            i, j = j, i
        if self._bitset is None:
            m = self.n * (self.n - 1) // 2
            bits = np.zeros((m + 7) // 8, dtype=np.uint8)
            pid = self._pair_ids(self.heads, self.tails)
            np.bitwise_or.at(bits, pid >> 3, np.uint8(1) << (pid & 7).astype(np.uint8))
            self._bitset = bits
        pid = i * (2 * self.n - i - 1) // 2 + (j - i - 1)
        return bool((self._bitset[pid >> 3] >> (pid & 7)) & 1)

    def _pair_ids(self, h, t):
        h = h.astype(np.int64)
        t = t.astype(np.int64)
        return h * (2 * self.n - h - 1) // 2 + (t - h - 1)

    # -- serialization: "n m" header plus one "i j" line per edge ----------

    def to_edgelist_text(self) -> str:
        lines = [f"{self.n} {self.num_edges}"]
        lines.extend(f"{int(a)} {int(b)}" for a, b in zip(self.heads, self.tails))
        return "\n".join(lines) + "\n"

    def sidecar(self) -> dict:
        doc = {"n": self.n, "seed": self.seed, "model": self.model}
        if self.latents is not None:
            if self.latents.kind == "blocks":
                coords = [int(c) for c in self.latents.coords]
            else:
                coords = [repr(float(c)) for c in self.latents.coords]
            doc["latents"] = {
                "kind": self.latents.kind,
                "seed": self.latents.seed,
                "coords": coords,
            }
        return doc

    def write(self, path) -> None:
        path = str(path)
        with open(path, "w") as fh:
            fh.write(self.to_edgelist_text())
        with open(path + ".json", "w") as fh:
            json.dump(self.sidecar(), fh)
            fh.write("\n")

    @classmethod
    def read(cls, path) -> "SampledGraph":
        path = str(path)
        with open(path) as fh:
            header = fh.readline().split()
            n, m = int(header[0]), int(header[1])
            heads = np.empty(m, dtype=np.int32)
            tails = np.empty(m, dtype=np.int32)
            for k in range(m):
                a, b = fh.readline().split()
                heads[k], tails[k] = int(a), int(b)
        graph = cls(n, heads, tails)
        try:
            with open(path + ".json") as fh:
                doc = json.load(fh)
        except FileNotFoundError:
            return graph
        graph.seed = doc.get("seed")
        graph.model = doc.get("model")
        lat = doc.get("latents")
        if lat:
            if lat["kind"] == "blocks":
                coords = np.array([int(c) for c in lat["coords"]], dtype=np.int64)
            else:
                coords = np.array([float(c) for c in lat["coords"]], dtype=np.float64)
            graph.latents = LatentSample(n, coords, lat["seed"], lat["kind"])
        return graph


def _model_descriptor(process, model):
    return {"process": process, "spec": model.to_json()}


def sample_rg(graphon: Graphon, n: int, seed: int) -> SampledGraph:
    """Sample the inhomogeneous random graph of order n driven by graphon."""
    latents = sample_latents(graphon, n, seed)
    code, a0, mat, idx, pos = graphon.pair_spec(latents.coords)
    heads, tails = kernels.pair_bernoulli_edges(code, a0, mat, idx, pos, n, seed)
    return SampledGraph(n, heads, tails, latents, _model_descriptor("rg", graphon), seed)


def sample_rk(kernel: Kernel, n: int, seed: int) -> SampledGraph:
    """Sample the kernel model: edge probability min(1, ln(n)/n * value)."""
    if n < 2:
        raise DomainError("kernel model needs n >= 2")
    latents = sample_latents(kernel, n, seed)
    rescale = math.log(n) / n
    code, a0, mat, idx, pos = kernel.pair_spec(latents.coords, rescale)
    heads, tails = kernels.pair_bernoulli_edges(code, a0, mat, idx, pos, n, seed)
    return SampledGraph(n, heads, tails, latents, _model_descriptor("rk", kernel), seed)


def degrees_rg(graphon: Graphon, n: int, seed: int) -> np.ndarray:
    """Degree sequence of sample_rg(graphon, n, seed) without storing edges;
    used by the minimum-degree and isolated-vertex campaigns."""
    latents = sample_latents(graphon, n, seed)
    code, a0, mat, idx, pos = graphon.pair_spec(latents.coords)
    return kernels.pair_bernoulli_degrees(code, a0, mat, idx, pos, n, seed)


def degrees_rk(kernel: Kernel, n: int, seed: int) -> np.ndarray:
    if n < 2:
        raise DomainError("kernel model needs n >= 2")
    latents = sample_latents(kernel, n, seed)
    rescale = math.log(n) / n
    code, a0, mat, idx, pos = kernel.pair_spec(latents.coords, rescale)
    return kernels.pair_bernoulli_degrees(code, a0, mat, idx, pos, n, seed)


def load_model(path_or_doc):
    """Model from a JSON file path or an already-parsed document."""
    if isinstance(path_or_doc, dict):
        return model_from_json(path_or_doc)
    with open(path_or_doc) as fh:
        return model_from_json(json.load(fh))
