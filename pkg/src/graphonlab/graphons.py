"""Graphons and kernels over the unit interval and finite block spaces.

A graphon is a symmetric measurable map W from Omega^2 to [0,1]; a kernel
is its unbounded nonnegative analogue, meant to be used with a log-scaled
edge-probability rescaling.  Omega is fixed to [0,1] with Lebesgue measure
for the interval variants and to a finite weighted block space for the step
variants; those two cover every construction this package needs.

Every variant carries closed forms for its analytic functionals:

* ``degree(x)``: the integral of W(x, .) over Omega,
* ``degree_tail_mass(alpha)``: the measure of points of degree <= alpha
  (weak inequality), whose small-alpha behaviour relative to alpha governs
  isolated vertices and connectivity of the sampled graphs,
* ``essential_min_degree``, ``edge_density``, ``is_connected``.

All values are immutable after construction; every operation is a pure
function, so instances are safe to share across threads.  ``evaluate`` and
``degree`` accept scalars or numpy arrays.
"""

from __future__ import annotations

import numpy as np


class DomainError(ValueError):
    """A point, parameter or argument lies outside the declared domain."""


class UnsupportedVariantError(TypeError):
    """Operation is only defined for a different model variant."""


def _check_unit(name, *vals):
    for v in vals:
        arr = np.asarray(v, dtype=np.float64)
        if not (np.all(arr >= 0.0) and np.all(arr <= 1.0)):
            raise DomainError(f"{name} must lie in [0, 1]")


def _as_symmetric_matrix(values, lo=0.0, hi=None):
    mat = np.ascontiguousarray(values, dtype=np.float64)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] == 0:
        raise DomainError("values must be a nonempty square matrix")
    if not np.array_equal(mat, mat.T):
        raise DomainError("values matrix must be exactly symmetric")
    if not np.all(np.isfinite(mat)) or np.any(mat < lo):
        raise DomainError("matrix entries out of range")
    if hi is not None and np.any(mat > hi):
        raise DomainError("matrix entries out of range")
    return mat


def _check_measures(measures):
    m = np.ascontiguousarray(measures, dtype=np.float64)
    if m.ndim != 1 or len(m) == 0 or np.any(m <= 0.0):
        raise DomainError("block measures must be strictly positive")
    if abs(float(m.sum()) - 1.0) > 1e-12:
        raise DomainError("block measures must sum to 1 within 1e-12")
    return m


def _dot_seq(weights, values):
    """Left-to-right weighted sum; summation order is part of the contract
    for the step-space degree identities."""
    total = 0.0
    for w, v in zip(weights, values):
        total += float(w) * float(v)
    return total


def _block_indices_valid(x, n_blocks):
    arr = np.asarray(x)
    if not np.issubdtype(arr.dtype, np.integer):
        if not np.all(arr == np.floor(arr)):
            return False
        arr = arr.astype(np.int64)
    return bool(np.all(arr >= 0) and np.all(arr < n_blocks))


def _block_graph_connected(values):
    """Connectivity of the positive-value block graph (self-loops ignored,
    except that a lone all-zero block is the identically-zero graphon,
    which is disconnected: splitting that block witnesses a zero cut)."""
    b = values.shape[0]
    if b == 1:
        return bool(values[0, 0] > 0.0)
    seen = np.zeros(b, dtype=bool)
    stack = [0]
    seen[0] = True
    while stack:
        a = stack.pop()
        for nb in np.nonzero(values[a] > 0.0)[0]:
            if nb != a and not seen[nb]:
                seen[nb] = True
                stack.append(int(nb))
    return bool(seen.all())


# ---------------------------------------------------------------------------
# graphon variants


class Graphon:
    """Base class; concrete variants implement the closed forms."""

    latent_kind = "interval"  # or "blocks"

    def evaluate(self, x, y):
        raise NotImplementedError

    def degree(self, x):
        raise NotImplementedError

    def degree_tail_mass(self, alpha):
        """Measure of the set of points with degree <= alpha."""
        raise NotImplementedError

    def essential_min_degree(self):
        raise NotImplementedError

    def edge_density(self):
        """Double integral of W; also the integral of the degree map."""
        raise NotImplementedError

    def is_connected(self):
        """False iff some set X with measure in (0,1) carries no W-mass to
        its complement."""
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def pair_spec(self, coords):
        """(code, a0, mat, idx, pos) consumed by the sampling kernels."""
        raise NotImplementedError

    def _check_alpha(self, alpha):
        a = float(alpha)
        if not 0.0 <= a <= 1.0:
            raise DomainError("alpha must lie in [0, 1]")
        return a

    def _check_point(self, x):
        _check_unit("point", x)


class Constant(Graphon):
    """W identically p; samples are Erdos-Renyi graphs G(n, p)."""

    def __init__(self, p: float):
        _check_unit("p", p)
        self.p = float(p)

    def evaluate(self, x, y):
        self._check_point(x)
        self._check_point(y)
        if np.ndim(x) == 0 and np.ndim(y) == 0:
            return self.p
        shape = np.broadcast_shapes(np.shape(x), np.shape(y))
        return np.full(shape, self.p)

    def degree(self, x):
        self._check_point(x)
        return self.p if np.ndim(x) == 0 else np.full(np.shape(x), self.p)

    def degree_tail_mass(self, alpha):
        return 1.0 if self._check_alpha(alpha) >= self.p else 0.0

    def essential_min_degree(self):
        return self.p

    def edge_density(self):
        return self.p

    def is_connected(self):
        return self.p > 0.0

    def to_json(self):
        return {"family": "graphon", "variant": "constant", "p": self.p}

    def pair_spec(self, coords):
        return (0, self.p, None, None, None)

    def __repr__(self):
        return f"Constant(p={self.p})"


class StepFunction(Graphon):
    """Block graphon: positive block measures summing to 1 and an exactly
    symmetric value matrix.  Points are block indices."""

    latent_kind = "blocks"

    def __init__(self, measures, values):
        self.measures = _check_measures(measures)
        self.values = _as_symmetric_matrix(values, 0.0, 1.0)
        if len(self.measures) != self.values.shape[0]:
            raise DomainError("measures and values sizes differ")
        self.n_blocks = len(self.measures)
        # sequential accumulation, so degree_restricted over all blocks
        # reproduces the degree bit for bit
        self.block_degrees = np.array(
            [_dot_seq(self.measures, self.values[a]) for a in range(self.n_blocks)]
        )

    def _check_block(self, x):
        if not _block_indices_valid(x, self.n_blocks):
            raise DomainError("point must be a valid block index")

    def evaluate(self, x, y):
        self._check_block(x)
        self._check_block(y)
        return self.values[x, y]

    def degree(self, x):
        self._check_block(x)
        return self.block_degrees[x]

    def degree_restricted(self, x, blocks):
        """Degree of block x restricted to a set of blocks: the sum of
        measure(b) * value(x, b) over b in blocks."""
        self._check_block(x)
        blocks = sorted(set(int(b) for b in blocks))
        if blocks and not _block_indices_valid(np.array(blocks), self.n_blocks):
            raise DomainError("blocks must be valid block indices")
        total = 0.0
        for b in blocks:
            total += float(self.measures[b]) * float(self.values[x, b])
        return total

    def degree_tail_mass(self, alpha):
        a = self._check_alpha(alpha)
        return float(self.measures[self.block_degrees <= a].sum())

    def essential_min_degree(self):
        return float(self.block_degrees.min())

    def edge_density(self):
        return float(self.measures @ self.values @ self.measures)

    def is_connected(self):
        return _block_graph_connected(self.values)

    def to_json(self):
        return {
            "family": "graphon",
            "variant": "step",
            "measures": [repr(float(v)) for v in self.measures],
            "values": [repr(float(v)) for v in self.values.ravel()],
        }

    def pair_spec(self, coords):
        return (1, 0.0, self.values, np.ascontiguousarray(coords, dtype=np.int64), None)

    def __repr__(self):
        return f"StepFunction(blocks={self.n_blocks})"


class PowerProduct(Graphon):
    """W(x, y) = x^t y^t on (0,1]^2 for a positive exponent t.

    Degree is x^t/(t+1), so the low-degree mass at level alpha is
    ((t+1) alpha)^(1/t): heavier than alpha for t > 1, lighter for t < 1.
    This one-parameter family crosses the isolated-vertex threshold at t=1.
    """

    def __init__(self, t: float):
        t = float(t)
        if not (t > 0.0 and np.isfinite(t)):
            raise DomainError("t must be positive and finite")
        self.t = t

    def evaluate(self, x, y):
        self._check_point(x)
        self._check_point(y)
        return (np.asarray(x, dtype=np.float64) * y) ** self.t if np.ndim(x) or np.ndim(y) else (x * y) ** self.t

    def degree(self, x):
        self._check_point(x)
        return np.asarray(x, dtype=np.float64) ** self.t / (self.t + 1.0)

    def degree_tail_mass(self, alpha):
        a = self._check_alpha(alpha)
        return float(min(1.0, ((self.t + 1.0) * a) ** (1.0 / self.t)))

    def essential_min_degree(self):
        return 0.0

    def edge_density(self):
        return (self.t + 1.0) ** -2

    def is_connected(self):
        return True  # W > 0 on (0,1]^2, so no positive-measure zero cut

    def to_json(self):
        return {"family": "graphon", "variant": "power_product", "t": self.t}

    def pair_spec(self, coords):
        # per-vertex powers once, so the pair loop is a pure product
        powered = np.power(np.ascontiguousarray(coords, dtype=np.float64), self.t)
        return (2, 0.0, None, None, powered)

    def __repr__(self):
        return f"PowerProduct(t={self.t})"


class CornerRamp(Graphon):
    """0 on [0,1/2)^2, 1 on [1/2,1]^2 and min(1, 3*min(x,y)) in between.

    Low-degree mass is 2*alpha/3 near zero.  The minimum degree of sampled
    graphs converges to a geometric law with success probability
    1 - exp(-2/3): low coordinates see their degree re-randomized in the
    edge stage, which Poissonizes the minimum.
    """

    def evaluate(self, x, y):
        self._check_point(x)
        self._check_point(y)
        lo = np.minimum(x, y)
        hi = np.maximum(x, y)
        val = np.where(hi < 0.5, 0.0, np.where(lo >= 0.5, 1.0, np.minimum(1.0, 3.0 * lo)))
        return float(val) if np.ndim(val) == 0 else val

    def degree(self, x):
        self._check_point(x)
        x = np.asarray(x, dtype=np.float64)
        d = np.where(x >= 0.5, 5.0 / 6.0, np.minimum(1.0, 3.0 * x) / 2.0)
        return float(d) if np.ndim(d) == 0 else d

    def degree_tail_mass(self, alpha):
        a = self._check_alpha(alpha)
        if a >= 5.0 / 6.0:
            return 1.0
        if a >= 0.5:
            return 0.5
        return 2.0 * a / 3.0

    def essential_min_degree(self):
        return 0.0

    def edge_density(self):
        return 7.0 / 12.0

    def is_connected(self):
        return True  # the high half couples to everything of positive degree

    def to_json(self):
        return {"family": "graphon", "variant": "corner_ramp"}

    def pair_spec(self, coords):
        return (3, 0.0, None, None, np.ascontiguousarray(coords, dtype=np.float64))

    def __repr__(self):
        return "CornerRamp()"


class DiagonalBand(Graphon):
    """Indicator of the band x/2 <= y <= 2x (quadrilateral with corners
    (0,0), (1,1/2), (1,1), (1/2,1); boundaries included).

    Low-degree mass is again 2*alpha/3 near zero, but here the sampled
    graph is a deterministic function of the latent coordinates, and the
    minimum degree converges to a geometric law with success 1/2.
    """

    def evaluate(self, x, y):
        self._check_point(x)
        self._check_point(y)
        lo = np.minimum(x, y)
        hi = np.maximum(x, y)
        val = np.where(hi <= 2.0 * lo, 1.0, 0.0)
        return float(val) if np.ndim(val) == 0 else val

    def degree(self, x):
        self._check_point(x)
        x = np.asarray(x, dtype=np.float64)
        d = np.minimum(1.0, 2.0 * x) - x / 2.0
        return float(d) if np.ndim(d) == 0 else d

    def degree_tail_mass(self, alpha):
        a = self._check_alpha(alpha)
        if a >= 0.75:
            return 1.0
        if a >= 0.5:
            return 8.0 * a / 3.0 - 1.0
        return 2.0 * a / 3.0

    def essential_min_degree(self):
        return 0.0

    def edge_density(self):
        # band area: 1 minus the two corner triangles below y=x/2 / above y=2x
        return 0.5

    def is_connected(self):
        return True  # overlapping dyadic bands chain any split together

    def to_json(self):
        return {"family": "graphon", "variant": "diagonal_band"}

    def pair_spec(self, coords):
        return (4, 0.0, None, None, np.ascontiguousarray(coords, dtype=np.float64))

    def __repr__(self):
        return "DiagonalBand()"


class Grid(Graphon):
    """Piecewise-constant graphon on a uniform resolution x resolution grid;
    the workhorse approximation for arbitrary graphons.  Points are reals
    in [0,1]; cell r is [r/res, (r+1)/res)."""

    def __init__(self, values):
        self.values = _as_symmetric_matrix(values, 0.0, 1.0)
        self.resolution = self.values.shape[0]
        self.row_means = self.values.mean(axis=1)

    def _cells(self, x):
        self._check_point(x)
        arr = np.asarray(x, dtype=np.float64)
        cells = np.minimum((arr * self.resolution).astype(np.int64), self.resolution - 1)
        return cells

    def evaluate(self, x, y):
        return self.values[self._cells(x), self._cells(y)]

    def degree(self, x):
        return self.row_means[self._cells(x)]

    def degree_tail_mass(self, alpha):
        a = self._check_alpha(alpha)
        return float((self.row_means <= a).sum()) / self.resolution

    def essential_min_degree(self):
        return float(self.row_means.min())

    def edge_density(self):
        return float(self.values.mean())

    def is_connected(self):
        return _block_graph_connected(self.values)

    def to_json(self):
        return {
            "family": "graphon",
            "variant": "grid",
            "resolution": self.resolution,
            "values": [repr(float(v)) for v in self.values.ravel()],
        }

    def pair_spec(self, coords):
        return (1, 0.0, self.values, self._cells(coords), None)

    def __repr__(self):
        return f"Grid(resolution={self.resolution})"


# ---------------------------------------------------------------------------
# kernel variants


class Kernel:
    """Nonnegative unbounded analogue of a graphon; edge probabilities are
    min(1, rescale * value) with rescale = ln(n)/n at sample size n."""

    latent_kind = "interval"

    def evaluate(self, x, y):
        raise NotImplementedError

    def degree(self, x):
        raise NotImplementedError

    def essential_min_degree(self):
        raise NotImplementedError

    def square_degree(self, x):
        """Degree of the pointwise square: integral of value(x, y)^2 dy."""
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def pair_spec(self, coords, rescale):
        raise NotImplementedError


class ConstantKernel(Kernel):
    def __init__(self, lam: float):
        lam = float(lam)
        if not (lam >= 0.0 and np.isfinite(lam)):
            raise DomainError("lambda must be nonnegative and finite")
        self.lam = lam

    def evaluate(self, x, y):
        _check_unit("point", x, y)
        return self.lam

    def degree(self, x):
        _check_unit("point", x)
        return self.lam

    def essential_min_degree(self):
        return self.lam

    def square_degree(self, x):
        _check_unit("point", x)
        return self.lam * self.lam

    def to_json(self):
        return {"family": "kernel", "variant": "constant", "lam": self.lam}

    def pair_spec(self, coords, rescale):
        return (0, min(1.0, self.lam * rescale), None, None, None)

    def __repr__(self):
        return f"ConstantKernel(lam={self.lam})"


class StepFunctionKernel(Kernel):
    latent_kind = "blocks"

    def __init__(self, measures, values):
        self.measures = _check_measures(measures)
        self.values = _as_symmetric_matrix(values, 0.0, None)
        if len(self.measures) != self.values.shape[0]:
            raise DomainError("measures and values sizes differ")
        self.n_blocks = len(self.measures)
        self.block_degrees = np.array(
            [_dot_seq(self.measures, self.values[a]) for a in range(self.n_blocks)]
        )

    def _check_block(self, x):
        if not _block_indices_valid(x, self.n_blocks):
            raise DomainError("point must be a valid block index")

    def evaluate(self, x, y):
        self._check_block(x)
        self._check_block(y)
        return self.values[x, y]

    def degree(self, x):
        self._check_block(x)
        return self.block_degrees[x]

    def essential_min_degree(self):
        return float(self.block_degrees.min())

    def square_degree(self, x):
        self._check_block(x)
        return (self.values[x] ** 2) @ self.measures

    def to_json(self):
        return {
            "family": "kernel",
            "variant": "step",
            "measures": [repr(float(v)) for v in self.measures],
            "values": [repr(float(v)) for v in self.values.ravel()],
        }

    def pair_spec(self, coords, rescale):
        mat = np.ascontiguousarray(np.minimum(1.0, self.values * rescale))
        return (1, 0.0, mat, np.ascontiguousarray(coords, dtype=np.int64), None)

    def __repr__(self):
        return f"StepFunctionKernel(blocks={self.n_blocks})"


class GridKernel(Kernel):
    def __init__(self, values):
        self.values = _as_symmetric_matrix(values, 0.0, None)
        self.resolution = self.values.shape[0]
        self.row_means = self.values.mean(axis=1)

    def _cells(self, x):
        _check_unit("point", x)
        arr = np.asarray(x, dtype=np.float64)
        return np.minimum((arr * self.resolution).astype(np.int64), self.resolution - 1)

    def evaluate(self, x, y):
        return self.values[self._cells(x), self._cells(y)]

    def degree(self, x):
        return self.row_means[self._cells(x)]

    def essential_min_degree(self):
        return float(self.row_means.min())

    def square_degree(self, x):
        return (self.values**2).mean(axis=1)[self._cells(x)]

    def to_json(self):
        return {
            "family": "kernel",
            "variant": "grid",
            "resolution": self.resolution,
            "values": [repr(float(v)) for v in self.values.ravel()],
        }

    def pair_spec(self, coords, rescale):
        mat = np.ascontiguousarray(np.minimum(1.0, self.values * rescale))
        return (1, 0.0, mat, self._cells(coords), None)

    def __repr__(self):
        return f"GridKernel(resolution={self.resolution})"


# ---------------------------------------------------------------------------
# low-degree closure for step graphons


def low_degree_closure(g: StepFunction, c: float, n: int, psi: float | None = None):
    """Iteratively absorb low-degree blocks and their dependents.

    Round zero takes every block of degree <= 2c/n; each later round takes
    the blocks that would lose more than three quarters of their degree if
    the set built so far were removed.  The result Z satisfies, exactly:

    * every block of degree <= 2c/n is in Z, and
    * every block outside Z keeps at least a quarter of its degree outside Z.

    When psi bounds the tail-mass ratio so that the degree-tail mass at
    2c/n is at most 2*c*psi/n, the measure of Z stays below 12*c*psi/n;
    passing psi turns that bound into a runtime check.
    """
    if not isinstance(g, StepFunction):
        raise UnsupportedVariantError("low_degree_closure needs a StepFunction graphon")
    c = float(c)
    n = int(n)
    if c < 1.0 or n < 1:
        raise DomainError("need c >= 1 and n >= 1")
    threshold = 2.0 * c / n
    in_z = g.block_degrees <= threshold
    outside = [b for b in range(g.n_blocks) if not in_z[b]]
    while True:
        added = []
        for b in outside:
            if g.degree_restricted(b, outside) < 0.25 * g.block_degrees[b]:
                added.append(b)
        if not added:
            break
        for b in added:
            in_z[b] = True
        outside = [b for b in outside if not in_z[b]]
    z = frozenset(int(b) for b in np.nonzero(in_z)[0])
    if psi is not None and g.degree_tail_mass(min(1.0, threshold)) <= 2.0 * c * psi / n:
        mass = float(sum(g.measures[b] for b in z))
        if not mass < 12.0 * c * psi / n:
            raise AssertionError("closure measure bound violated; construction bug")
    return z


# ---------------------------------------------------------------------------
# serialization


_GRAPHON_VARIANTS = {
    "constant": lambda d: Constant(float(d["p"])),
    "step": lambda d: StepFunction(
        [float(v) for v in d["measures"]],
        np.array([float(v) for v in d["values"]]).reshape(len(d["measures"]), -1),
    ),
    "power_product": lambda d: PowerProduct(float(d["t"])),
    "corner_ramp": lambda d: CornerRamp(),
    "diagonal_band": lambda d: DiagonalBand(),
    "grid": lambda d: Grid(
        np.array([float(v) for v in d["values"]]).reshape(int(d["resolution"]), -1)
    ),
}

_KERNEL_VARIANTS = {
    "constant": lambda d: ConstantKernel(float(d["lam"])),
    "step": lambda d: StepFunctionKernel(
        [float(v) for v in d["measures"]],
        np.array([float(v) for v in d["values"]]).reshape(len(d["measures"]), -1),
    ),
    "grid": lambda d: GridKernel(
        np.array([float(v) for v in d["values"]]).reshape(int(d["resolution"]), -1)
    ),
}


def model_from_json(doc: dict):
    """Rebuild a graphon or kernel from its JSON document (bit-stable)."""
    family = doc.get("family", "graphon")
    variant = doc.get("variant")
    table = _GRAPHON_VARIANTS if family == "graphon" else _KERNEL_VARIANTS
    if family not in ("graphon", "kernel") or variant not in table:
        raise DomainError(f"unknown model {family}/{variant}")
    return table[variant](doc)


def model_to_json(model) -> dict:
    return model.to_json()
