"""Probability utilities and independent oracles.

The two minimum-degree oracles simulate the limit objects directly from
Poisson point processes, with no graph sampling involved, so they can
arbitrate what the graph campaigns should converge to:

* ``mindeg_oracle_corner_ramp``: arrivals with intensity 2/3, each marked
  with an independent Poisson variable whose mean is the arrival position;
  the outcome is the minimum mark.  Thinning the arrivals by the event
  "mark <= k-1" leaves a Poisson count with mean (2/3)k, so the law is
  geometric with success 1 - exp(-2/3).  (Notes sometimes quote 1 -
  exp(-1.5) for this law; the thinning computation and this oracle both
  give 1 - exp(-2/3), and the empirical suite pins that value.)
* ``mindeg_oracle_diagonal_band``: unit-intensity arrivals; the outcome
  counts arrivals strictly between the first arrival and twice it, which
  integrates to a geometric law with success 1/2.

Poisson marks are drawn by exact CDF-walk inversion (reproducible across
platforms); the walk is capped at the running minimum, which never changes
the result.  The corner-ramp horizon defaults to 60: the chance that an
arrival beyond 60 produces a mark small enough to matter is below 1e-15
for outcomes up to 12, far under the reported resolution (and the horizon
auto-extends until the process has at least one arrival, so the minimum is
never over an empty set).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._backend import kernels
from ._rng import STAGE_ARRIVAL, draw_uniform
from .graphons import DomainError

__all__ = [
    "EmpiricalDistribution",
    "binomial_tail_bound",
    "binomial_cdf_exact",
    "ppp_sample",
    "mindeg_oracle_corner_ramp",
    "mindeg_oracle_diagonal_band",
    "geometric_pmf",
    "tv_distance",
]


@dataclass
class EmpiricalDistribution:
    """Counts over nonnegative integer outcomes."""

    counts: dict
    total: int

    @classmethod
    def from_outcomes(cls, outcomes) -> "EmpiricalDistribution":
        counts = {}
        for v in outcomes:
            v = int(v)
            counts[v] = counts.get(v, 0) + 1
        total = sum(counts.values())
        if total < 1:
            raise DomainError("empirical distribution needs at least one outcome")
        return cls(counts, total)

    def prob(self, k: int) -> float:
        return self.counts.get(int(k), 0) / self.total

    def prob_at_least(self, k: int) -> float:
        return sum(c for v, c in self.counts.items() if v >= k) / self.total

    def support(self):
        return sorted(self.counts)

    def to_csv(self) -> str:
        lines = ["outcome,count"]
        lines.extend(f"{k},{self.counts[k]}" for k in self.support())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "EmpiricalDistribution":
        rows = [ln for ln in text.strip().splitlines()[1:] if ln]
        counts = {int(k): int(c) for k, c in (ln.split(",") for ln in rows)}
        return cls(counts, sum(counts.values()))


def binomial_tail_bound(n: int, p, r):
    """Upper bound (n-r)p / (np-r)^2 for P[Bin(n,p) <= r]; needs r < np.

    Accepts floats or Fractions and preserves exactness for the latter.
    """
    if n < 1:
        raise DomainError("n must be positive")
    if not 0 <= p <= 1:
        raise DomainError("p must lie in [0, 1]")
    if r < 0:
        raise DomainError("r must be nonnegative")
    if r >= n * p:
        raise DomainError("the bound needs r < n*p")
    return (n - r) * p / (n * p - r) ** 2


def binomial_cdf_exact(n: int, p, r: int) -> Fraction:
    """P[Bin(n,p) <= r] as an exact rational; the oracle for the bound."""
    if not 0 <= r <= n:
        raise DomainError("need 0 <= r <= n")
    if n > 64:
        raise DomainError("exact CDF is specified for n <= 64")
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise DomainError("p must lie in [0, 1]")
    q = 1 - p
    total = Fraction(0)
    for k in range(r + 1):
        total += math.comb(n, k) * p**k * q ** (n - k)
    return total


def ppp_sample(intensity: float, horizon: float, seed: int, stream: int = 0) -> np.ndarray:
    """Ordered Poisson-point-process arrivals on [0, horizon]: cumulative
    sums of exponential(intensity) inter-arrival gaps.  stream selects a
    replicate substream and matches the oracles' arrival streams."""
    if not intensity > 0:
        raise DomainError("intensity must be positive")
    if not (horizon > 0 and math.isfinite(horizon)):
        raise DomainError("horizon must be positive and finite")
    points = []
    s = 0.0
    k = 0
    while True:
        u = draw_uniform(seed, STAGE_ARRIVAL, stream, k)
        k += 1
        s += -math.log(1.0 - u) / intensity
        if s > horizon:
            return np.array(points, dtype=np.float64)
        points.append(s)


def mindeg_oracle_corner_ramp(
    reps: int, seed: int, intensity: float = 2.0 / 3.0, horizon: float = 60.0
) -> EmpiricalDistribution:
    """Limit law of the corner-ramp minimum degree, simulated directly."""
    if reps < 1:
        raise DomainError("reps must be at least 1")
    mins = kernels.oracle_ramp_min(reps, seed, intensity, horizon)
    return EmpiricalDistribution.from_outcomes(mins)


def mindeg_oracle_diagonal_band(reps: int, seed: int) -> EmpiricalDistribution:
    """Limit law of the diagonal-band minimum degree, simulated directly."""
    if reps < 1:
        raise DomainError("reps must be at least 1")
    counts = kernels.oracle_band_count(reps, seed)
    return EmpiricalDistribution.from_outcomes(counts)


def geometric_pmf(p: float, k: int) -> float:
    """P[X = k] = p (1-p)^k on k = 0, 1, 2, ..."""
    return p * (1.0 - p) ** k


def tv_distance(emp: EmpiricalDistribution, geometric_p: float, support_cap: int) -> float:
    """Total variation distance between emp and Geometric(geometric_p).

    Terms up to support_cap are summed directly; beyond the cap the
    empirical support (finite) is handled point by point and the remaining
    geometric tail mass is added in closed form, so the value is the full
    TV distance, not a truncation.
    """
    if not 0.0 < geometric_p <= 1.0:
        raise DomainError("geometric success parameter must lie in (0, 1]")
    if support_cap < 0:
        raise DomainError("support_cap must be nonnegative")
    acc = 0.0
    for k in range(support_cap + 1):
        acc += abs(emp.prob(k) - geometric_pmf(geometric_p, k))
    tail_geom = (1.0 - geometric_p) ** (support_cap + 1)
    for k in emp.support():
        if k > support_cap:
            gk = geometric_pmf(geometric_p, k)
            acc += abs(emp.prob(k) - gk)
            tail_geom -= gk
    acc += max(0.0, tail_geom)
    return 0.5 * acc
