"""Configuration-driven Monte Carlo campaigns.

Each campaign kind maps a model plus a ladder of sizes n to per-replicate
statistics, aggregated into CSV rows (fixed schema v1, see README) plus a
JSON summary.  Replicates get independent counter-derived seeds, and the
aggregation folds in replicate order, so a campaign's CSV output is byte
for byte reproducible for a given base seed no matter how the replicates
were scheduled.  Wall time lives only in the JSON summary.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from multiprocessing import Pool

import numpy as np

from ._backend import backend_name
from ._rng import STAGE_REPLICATE, draw_u64
from .analysis import components, micro_macro_disconnected, vertex_connectivity_at_least
from .graphons import DomainError, Graphon, Kernel, model_from_json
from .incremental import incremental_process
from .oracles import EmpiricalDistribution
from .sampling import degrees_rg, degrees_rk, sample_rg, sample_rk
from .sprouts import Sprout, cover_decompose, random_sprout, sprout_stats, validate_sprout, verify_cover

__all__ = ["ConfigError", "ExperimentConfig", "ExperimentResult", "run", "write_outputs", "KINDS"]

KINDS = ("mindeg-dist", "iso-scan", "conn-scan", "rk-scan", "hitting", "gfun-curve", "sprout-fuzz")

SCHEMA_VERSION = "v1"


class ConfigError(ValueError):
    """Invalid experiment configuration; carries the offending field path."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"config.{path}: {message}")


def campaign_seed(base_seed: int, n_index: int, rep: int) -> int:
    """Independent sampler seed for replicate rep at ladder position n_index."""
    return draw_u64(base_seed, STAGE_REPLICATE, n_index, rep)


@dataclass
class ExperimentConfig:
    kind: str
    model: object | None = None  # Graphon or Kernel instance
    n_values: list = field(default_factory=list)
    reps: int = 1
    k: int = 1
    gamma: float | None = None
    alphas: list | None = None
    max_vertices: int = 50
    seed: int = 0
    out: str | None = None

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        if not isinstance(doc, dict):
            raise ConfigError("", "must be a JSON object")
        kind = doc.get("kind")
        if kind not in KINDS:
            raise ConfigError("kind", f"must be one of {', '.join(KINDS)}")
        model = None
        if kind != "sprout-fuzz":
            if "model" not in doc:
                raise ConfigError("model", "is required for this kind")
            try:
                model = model_from_json(doc["model"])
            except (DomainError, KeyError, TypeError, ValueError) as exc:
                raise ConfigError("model", str(exc)) from exc
            if kind == "rk-scan":
                if not isinstance(model, Kernel):
                    raise ConfigError("model", "rk-scan needs a kernel model")
            elif not isinstance(model, Graphon):
                raise ConfigError("model", f"{kind} needs a graphon model")
        n_raw = doc.get("n", [])
        if isinstance(n_raw, int):
            n_raw = [n_raw]
        if kind not in ("gfun-curve", "sprout-fuzz"):
            if not n_raw or not all(isinstance(v, int) and v >= 2 for v in n_raw):
                raise ConfigError("n", "must be one or more integers >= 2")
        reps = doc.get("reps", 1)
        if kind != "gfun-curve" and (not isinstance(reps, int) or reps < 1):
            raise ConfigError("reps", "must be a positive integer")
        k = doc.get("K", 1)
        if not isinstance(k, int) or k < 1:
            raise ConfigError("K", "must be a positive integer")
        if kind in ("conn-scan", "hitting") and n_raw and k >= min(n_raw):
            raise ConfigError("K", "must be smaller than every n")
        gamma = doc.get("gamma")
        if gamma is not None:
            gamma = float(gamma)
            if not 0.0 < gamma <= 0.5:
                raise ConfigError("gamma", "must lie in (0, 1/2]")
        alphas = doc.get("alphas")
        if kind == "gfun-curve":
            if alphas is None:
                alphas = [i / 100 for i in range(1, 41)]
            try:
                alphas = [float(a) for a in alphas]
            except (TypeError, ValueError):
                raise ConfigError("alphas", "must be a list of numbers")
            if not alphas or not all(0.0 <= a <= 1.0 for a in alphas):
                raise ConfigError("alphas", "values must lie in [0, 1]")
        max_vertices = doc.get("max_vertices", 50)
        if not isinstance(max_vertices, int) or max_vertices < 1:
            raise ConfigError("max_vertices", "must be a positive integer")
        seed = doc.get("seed", 0)
        if not isinstance(seed, int):
            raise ConfigError("seed", "must be an integer")
        out = doc.get("out")
        return cls(kind, model, list(n_raw), int(reps), k, gamma, alphas, max_vertices, seed, out)


@dataclass
class ExperimentResult:
    kind: str
    columns: list
    rows: list
    summary: dict

    def to_csv(self) -> str:
        lines = [",".join(self.columns)]
        for row in self.rows:
            lines.append(",".join(_fmt(v) for v in row))
        return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _prop_se(p: float, reps: int) -> float:
    return math.sqrt(p * (1.0 - p) / reps)


def _mean_se(values) -> tuple:
    arr = np.asarray(values, dtype=np.float64)
    mean = float(arr.mean())
    se = float(arr.std(ddof=1) / math.sqrt(len(arr))) if len(arr) > 1 else 0.0
    return mean, se


def _map(fn, args, threads):
    if threads <= 1:
        return [fn(a) for a in args]
    with Pool(processes=threads) as pool:
        return pool.map(fn, args, chunksize=max(1, len(args) // (4 * threads)))


# -- per-replicate workers (module level so they pickle) --------------------


def _w_mindeg(args):
    model, n, seed = args
    return int(degrees_rg(model, n, seed).min())


def _w_iso(args):
    model, n, seed = args
    deg = degrees_rg(model, n, seed)
    return int((deg == 0).sum())


def _w_conn(args):
    model, n, seed, k, gamma = args
    g = sample_rg(model, n, seed)
    row = [bool(vertex_connectivity_at_least(g, k))]
    if gamma is not None:
        micro, macro = micro_macro_disconnected(g, gamma)
        row.extend([micro, macro])
    return row


def _w_rk(args):
    model, n, seed = args
    g = sample_rk(model, n, seed)
    deg = g.degrees()
    return [len(components(g)) == 1, bool((deg == 0).any())]


def _w_hitting(args):
    model, n, seed, k = args
    trace = incremental_process(model, n, seed, max_k=k)
    return [trace.hit_min_deg[k], trace.hit_conn[k]]


def _w_sprout(args):
    seed, max_vertices = args
    sp = random_sprout(seed, max_vertices)
    ok_valid = isinstance(validate_sprout(sp.vertices, sp.edges), Sprout)
    st = sprout_stats(sp)
    ok_weight = st.total * 2 <= st.flow
    family = cover_decompose(sp)
    ok_cover = bool(verify_cover(sp, family))
    return [ok_valid, ok_weight, ok_cover]


# -- kind runners ------------------------------------------------------------


def _run_mindeg(cfg, threads):
    columns = ["n", "outcome", "count", "proportion", "stderr", "reps"]
    rows = []
    for ni, n in enumerate(cfg.n_values):
        args = [(cfg.model, n, campaign_seed(cfg.seed, ni, r)) for r in range(cfg.reps)]
        outcomes = _map(_w_mindeg, args, threads)
        dist = EmpiricalDistribution.from_outcomes(outcomes)
        for k in dist.support():
            p = dist.prob(k)
            rows.append((n, k, dist.counts[k], p, _prop_se(p, cfg.reps), cfg.reps))
    return columns, rows


def _run_iso(cfg, threads):
    columns = ["n", "statistic", "estimate", "stderr", "reps"]
    rows = []
    for ni, n in enumerate(cfg.n_values):
        args = [(cfg.model, n, campaign_seed(cfg.seed, ni, r)) for r in range(cfg.reps)]
        iso_counts = _map(_w_iso, args, threads)
        p = sum(1 for c in iso_counts if c > 0) / cfg.reps
        rows.append((n, "prop_with_isolated", p, _prop_se(p, cfg.reps), cfg.reps))
        mean, se = _mean_se(iso_counts)
        rows.append((n, "mean_isolated_count", mean, se, cfg.reps))
    return columns, rows


def _run_conn(cfg, threads):
    columns = ["n", "K", "statistic", "estimate", "stderr", "reps"]
    rows = []
    for ni, n in enumerate(cfg.n_values):
        args = [
            (cfg.model, n, campaign_seed(cfg.seed, ni, r), cfg.k, cfg.gamma)
            for r in range(cfg.reps)
        ]
        results = _map(_w_conn, args, threads)
        p = sum(1 for r in results if r[0]) / cfg.reps
        rows.append((n, cfg.k, "prop_kconnected", p, _prop_se(p, cfg.reps), cfg.reps))
        if cfg.gamma is not None:
            pm = sum(1 for r in results if r[1]) / cfg.reps
            pM = sum(1 for r in results if r[2]) / cfg.reps
            rows.append((n, cfg.k, "prop_micro_disconnected", pm, _prop_se(pm, cfg.reps), cfg.reps))
            rows.append((n, cfg.k, "prop_macro_disconnected", pM, _prop_se(pM, cfg.reps), cfg.reps))
    return columns, rows


def _run_rk(cfg, threads):
    columns = ["n", "statistic", "estimate", "stderr", "reps"]
    rows = []
    for ni, n in enumerate(cfg.n_values):
        args = [(cfg.model, n, campaign_seed(cfg.seed, ni, r)) for r in range(cfg.reps)]
        results = _map(_w_rk, args, threads)
        p_conn = sum(1 for r in results if r[0]) / cfg.reps
        p_iso = sum(1 for r in results if r[1]) / cfg.reps
        rows.append((n, "prop_connected", p_conn, _prop_se(p_conn, cfg.reps), cfg.reps))
        rows.append((n, "prop_with_isolated", p_iso, _prop_se(p_iso, cfg.reps), cfg.reps))
    return columns, rows


def _run_hitting(cfg, threads):
    columns = ["n", "K", "statistic", "estimate", "stderr", "reps"]
    rows = []
    for ni, n in enumerate(cfg.n_values):
        args = [(cfg.model, n, campaign_seed(cfg.seed, ni, r), cfg.k) for r in range(cfg.reps)]
        results = _map(_w_hitting, args, threads)
        equal = [hm is not None and hc == hm for hm, hc in results]
        p = sum(equal) / cfg.reps
        rows.append((n, cfg.k, "prop_conn_hits_mindeg", p, _prop_se(p, cfg.reps), cfg.reps))
        mean_m, se_m = _mean_se([hm for hm, _ in results])
        mean_c, se_c = _mean_se([hc for _, hc in results])
        rows.append((n, cfg.k, "mean_hit_mindeg", mean_m, se_m, cfg.reps))
        rows.append((n, cfg.k, "mean_hit_conn", mean_c, se_c, cfg.reps))
    return columns, rows


def _run_gfun(cfg, threads):
    columns = ["alpha", "tail_mass", "ratio"]
    rows = []
    for a in cfg.alphas:
        mass = cfg.model.degree_tail_mass(a)
        ratio = mass / a if a > 0 else float("nan")
        rows.append((float(a), float(mass), float(ratio)))
    return columns, rows


def _run_sprout(cfg, threads):
    columns = ["check", "passes", "failures", "total"]
    args = [(campaign_seed(cfg.seed, 0, r), cfg.max_vertices) for r in range(cfg.reps)]
    results = _map(_w_sprout, args, threads)
    rows = []
    for idx, name in enumerate(["flow_reduction", "total_weight_bound", "cover_verified"]):
        passes = sum(1 for r in results if r[idx])
        rows.append((name, passes, cfg.reps - passes, cfg.reps))
    return columns, rows


_RUNNERS = {
    "mindeg-dist": _run_mindeg,
    "iso-scan": _run_iso,
    "conn-scan": _run_conn,
    "rk-scan": _run_rk,
    "hitting": _run_hitting,
    "gfun-curve": _run_gfun,
    "sprout-fuzz": _run_sprout,
}


def run(config: ExperimentConfig, threads: int = 1) -> ExperimentResult:
    start = time.perf_counter()
    columns, rows = _RUNNERS[config.kind](config, threads)
    wall = time.perf_counter() - start
    summary = {
        "schema": SCHEMA_VERSION,
        "kind": config.kind,
        "seed": config.seed,
        "reps": config.reps,
        "n": config.n_values,
        "K": config.k,
        "model": config.model.to_json() if config.model is not None else None,
        "backend": backend_name(),
        "wall_time_s": wall,
        "rows": [list(r) for r in rows],
        "columns": columns,
    }
    return ExperimentResult(config.kind, columns, rows, summary)


def write_outputs(result: ExperimentResult, out_dir) -> tuple:
    """Write <kind>.csv (byte-reproducible) and <kind>.json (adds timing)."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, f"{result.kind}.csv")
    json_path = os.path.join(out_dir, f"{result.kind}.json")
    with open(csv_path, "w") as fh:
        fh.write(result.to_csv())
    with open(json_path, "w") as fh:
        json.dump(result.summary, fh, indent=1)
        fh.write("\n")
    return csv_path, json_path
