"""Monte-Carlo harness for the interference scaling laws.

Every row of a run is a pure function of the experiment spec: the per-trial
RNG seed is derived from (master_seed, n, trial) through a SeedSequence, so
parallel and sequential executions produce identical tables.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .geometry import PointSet, ZenoConfig, gen_halving_chain, gen_uniform, gen_zeno, zeno_scale
from .graphs import build_mst, build_nn_graph, distance_ratio, is_connected
from .interference import interference_report_accelerated
from .topologies import TopologyConfig, build_bucketed_graph, build_cell_partition, build_hub_graph

__all__ = [
    "ExperimentSpec",
    "ExperimentRow",
    "ExperimentResult",
    "PRESETS",
    "derive_seed",
    "run_scaling",
    "summarize",
    "fit_power_of_log",
    "run_adversarial",
    "embed_zeno",
    "CSV_HEADER",
]

CSV_HEADER = "n,d,trial,seed,topology,interference,wall_ms,D,max_cell,edges"

_TOPOLOGIES = ("mst", "hub", "bucketed", "nn")


@dataclass(frozen=True)
class ExperimentSpec:
    sizes: tuple
    d: int = 2
    trials: int = 1
    master_seed: int = 0
    topologies: tuple = ("mst",)
    overrides: TopologyConfig | None = None

    def __post_init__(self):
        sizes = tuple(int(v) for v in self.sizes)
        if any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise ValueError("sizes must be strictly increasing")
        if not sizes:
            raise ValueError("need at least one size")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for t in self.topologies:
            if t not in _TOPOLOGIES:
                raise ValueError(f"unknown topology {t!r}")
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "topologies", tuple(self.topologies))


@dataclass(frozen=True)
class ExperimentRow:
    n: int
    d: int
    trial: int
    seed: int
    topology: str
    interference: int
    wall_ms: float
    distance_ratio: float
    max_cell: int  # 0 for topologies without a cell partition
    edges: int


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    rows: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    def to_csv(self, include_timing: bool = True) -> str:
        lines = [CSV_HEADER]
        for r in self.rows:
            wall = f"{r.wall_ms:.3f}" if include_timing else ""
            lines.append(
                f"{r.n},{r.d},{r.trial},{r.seed},{r.topology},"
                f"{r.interference},{wall},{r.distance_ratio:.17g},"
                f"{r.max_cell},{r.edges}")
        return "\n".join(lines) + "\n"

    def medians(self, topology: str) -> dict:
        """Median interference per size for one topology."""
        out = {}
        for n in self.spec.sizes:
            vals = [r.interference for r in self.rows
                    if r.n == n and r.topology == topology]
            if vals:
                out[n] = float(np.median(vals))
        return out


def derive_seed(master_seed: int, n: int, trial: int) -> int:
    ss = np.random.SeedSequence([int(master_seed), int(n), int(trial)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _build(topology: str, ps: PointSet, cfg: TopologyConfig):
    if topology == "mst":
        return build_mst(ps)
    if topology == "hub":
        return build_hub_graph(ps, cfg)
    if topology == "bucketed":
        return build_bucketed_graph(ps, cfg)
    if topology == "nn":
        return build_nn_graph(ps)
    raise ValueError(f"unknown topology {topology!r}")


def _run_trial(spec: ExperimentSpec, n: int, trial: int) -> list:
    seed = derive_seed(spec.master_seed, n, trial)
    ps = gen_uniform(n, spec.d, seed)
    ratio = distance_ratio(ps)
    cfg = spec.overrides if spec.overrides is not None else TopologyConfig()
    rows = []
    for topology in spec.topologies:
        t0 = time.perf_counter()
        g = _build(topology, ps, cfg)
        rep = interference_report_accelerated(ps, g)
        wall_ms = (time.perf_counter() - t0) * 1000.0
        max_cell = 0
        if topology == "bucketed":
            max_cell = int(build_cell_partition(ps, cfg).occupancy().max())
        rows.append(ExperimentRow(
            n=n, d=spec.d, trial=trial, seed=seed, topology=topology,
            interference=rep.max_value, wall_ms=wall_ms,
            distance_ratio=ratio, max_cell=max_cell, edges=g.m))
    return rows


def run_scaling(spec: ExperimentSpec, workers: int = 1) -> ExperimentResult:
    """One row per (size, trial, topology); per-row failures are recorded and
    the run continues.  Row order and content are independent of `workers`."""
    result = ExperimentResult(spec)
    tasks = [(n, trial) for n in spec.sizes for trial in range(spec.trials)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(
                lambda task: _safe_trial(spec, *task), tasks))
    else:
        outcomes = [_safe_trial(spec, n, trial) for n, trial in tasks]
    for (n, trial), (rows, err) in zip(tasks, outcomes):
        if err is not None:
            result.failures.append((n, trial, err))
        else:
            result.rows.extend(rows)
    return result


def _safe_trial(spec, n, trial):
    try:
        return _run_trial(spec, n, trial), None
    except Exception as exc:  # recorded, run continues
        return None, repr(exc)


def summarize(res: ExperimentResult) -> list:
    """Per (n, topology) interference statistics."""
    if not res.rows:
        raise ValueError("empty result")
    out = []
    for n in res.spec.sizes:
        for topology in res.spec.topologies:
            vals = np.array([r.interference for r in res.rows
                             if r.n == n and r.topology == topology])
            if vals.size == 0:
                continue
            out.append({
                "n": n,
                "topology": topology,
                "count": int(vals.size),
                "min": int(vals.min()),
                "median": float(np.median(vals)),
                "mean": float(vals.mean()),
                "max": int(vals.max()),
                "stddev": float(vals.std()),
            })
    return out


def summary_to_json(summary: list) -> str:
    return json.dumps(summary, indent=2)


def fit_power_of_log(res: ExperimentResult, topology: str):
    """Least-squares slope of log(median interference) vs log(log2 n).

    The slope estimates the exponent b in interference ~ a * (log2 n)^b.
    Returns (exponent, r_squared).
    """
    med = res.medians(topology)
    if len(med) < 4:
        raise ValueError("need at least 4 distinct sizes to fit")
    x = np.log([math.log2(n) for n in med])
    y = np.log([v for v in med.values()])
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    ss_res = float(((y - pred) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(slope), r2


def embed_zeno(k: int, n: int, seed: int, d: int = 2) -> PointSet:
    """n uniform points with a canonical Zeno configuration of size k planted
    at the center, at the scale making the outer ball have area 1/n.

    Uniform points falling inside the outer ball are removed so that the
    ball contains exactly the configuration.
    """
    u = zeno_scale(n, k)
    center = np.full(d, 0.5)
    ambient = gen_uniform(n, d, seed)
    r = u * 3.0 ** k
    diff = ambient.coords - center
    keep = (diff * diff).sum(axis=1) > r * r
    zeno = gen_zeno(ZenoConfig(k=k, u=u, center=tuple(center)), d=d)
    return PointSet(np.concatenate((ambient.coords[keep], zeno.coords)))


def run_adversarial(kind: str, param: int, ambient_n: int | None = None,
                    seed: int = 0) -> list:
    """Build an adversarial point set, run mst + hub, and hard-assert the
    certified MST lower bound (k-1 for Zeno, n-1 for the halving chain)."""
    if kind == "zeno":
        if param < 2:
            raise ValueError("zeno needs k >= 2")
        if ambient_n is not None:
            ps = embed_zeno(param, ambient_n, seed)
        else:
            ps = gen_zeno(ZenoConfig(k=param))
        bound = param - 1
    elif kind == "chain":
        if param < 2:
            raise ValueError("chain needs n >= 2")
        ps = gen_halving_chain(param)
        bound = param - 1
    else:
        raise ValueError(f"unknown adversarial kind {kind!r}")

    rows = []
    for topology, g in (("mst", build_mst(ps)), ("hub", build_hub_graph(ps))):
        rep = interference_report_accelerated(ps, g)
        rows.append({
            "kind": kind,
            "param": param,
            "ambient_n": ambient_n,
            "topology": topology,
            "n": ps.n,
            "interference": rep.max_value,
            "bound": bound,
            "connected": is_connected(g),
        })
    mst_row = rows[0]
    if mst_row["interference"] < bound:
        raise AssertionError(
            f"certified bound violated: interference {mst_row['interference']}"
            f" < {bound} for {kind}({param})")
    return rows


PRESETS = {
    "smoke": ExperimentSpec(
        sizes=(256, 512),
        d=2,
        trials=3,
        master_seed=7,
        topologies=("mst", "hub", "bucketed", "nn"),
    ),
    "paper-thm1": ExperimentSpec(
        sizes=(2 ** 10, 2 ** 12, 2 ** 14, 2 ** 16, 2 ** 18),
        d=2,
        trials=30,
        master_seed=20120205,
        topologies=("mst", "bucketed"),
    ),
}
