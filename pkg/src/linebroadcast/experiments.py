"""Monte Carlo harness: density sweeps, normalized-difference and b_m histograms.

Trial ``t`` of grid point ``p`` draws its network from the stream keyed
``(p, t)`` (see :mod:`linebroadcast.topogen`), so results do not depend on
the number of workers or on scheduling order.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .assigners import (
    distributed_assign,
    expected_distributed_cost,
    identical_cost,
    identical_range,
    optimal_assign,
)
from .network import NetworkError, assignment_cost, distance, validate_broadcast
from .serialize import dumps, fmt_float, write_text
from .topogen import GenSpec, generate

ALGORITHMS = ("optimal", "suboptimal", "distributed")
PAIRS = (("distributed", "optimal"), ("suboptimal", "optimal"), ("distributed", "suboptimal"))
SWEEP_COLUMNS = ("lambda", "algorithm", "mean_cost", "stderr", "trials", "seed")
HIST_COLUMNS = ("bin_lo", "bin_hi", "count")


def normalized_difference(c1: float, c2: float) -> float:
    lo, hi = min(c1, c2), max(c1, c2)
    if not lo > 0:
        raise NetworkError(f"cost: normalized difference needs positive costs, got ({c1}, {c2})")
    return (hi - lo) / lo


@dataclass(frozen=True)
class ExperimentConfig:
    length: float = 5000.0
    lambdas: Tuple[float, ...] = (0.01, 0.02, 0.03)
    trials: int = 10000
    alpha: float = 2.0
    pcs: Tuple[float, ...] = (0.85, 0.9, 0.99)
    seed: int = 0
    algorithms: Tuple[str, ...] = ALGORITHMS
    mode: str = "uniform"  # uniform | expgap | adv_a | adv_b
    source_policy: str = "random"
    audit: bool = False  # revalidate every trial instead of every 100th
    bins: int = 50
    workers: int = 1
    r1: float = 102.0
    r2: float = 100.0
    eps1: float = 1.0
    eps2: Optional[float] = None

    def __post_init__(self):
        if self.trials < 1:
            raise NetworkError(f"trials: need at least 1, got {self.trials}")
        if not self.lambdas or any(not lam > 0 for lam in self.lambdas):
            raise NetworkError("lambda: grid must hold positive densities")
        if not self.length > 0:
            raise NetworkError(f"length: must be positive, got {self.length}")
        for alg in self.algorithms:
            if alg not in ALGORITHMS + ("analytic",):
                raise NetworkError(f"algorithms: unknown algorithm {alg!r}")
        if self.bins < 1:
            raise NetworkError(f"bins: need at least 1, got {self.bins}")
        if self.workers < 1:
            raise NetworkError(f"workers: need at least 1, got {self.workers}")
        self.gen_spec(0)

    def n_for(self, lam: float) -> int:
        return int(round(lam * self.length))

    def gen_spec(self, point: int) -> GenSpec:
        lam = self.lambdas[point]
        return GenSpec(
            mode=self.mode, n=self.n_for(lam), length=self.length, lam=lam, seed=self.seed,
            source_policy=self.source_policy, r1=self.r1, r2=self.r2, eps1=self.eps1, eps2=self.eps2,
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambdas"] = list(self.lambdas)
        d["pcs"] = list(self.pcs)
        d["algorithms"] = list(self.algorithms)
        d.pop("workers")
        return d


@dataclass
class TrialRecord:
    point: int
    trial: int
    n: int
    source: int
    length: float
    costs: Dict[str, float]
    bm: Optional[int]
    bm_distance: Optional[float]
    normdiff: Dict[str, float]


def pair_key(a: str, b: str) -> str:
    return f"{a}-{b}"


def _computed(cfg: ExperimentConfig) -> Tuple[str, ...]:
    return tuple(a for a in ALGORITHMS if a in cfg.algorithms)


def run_trial(cfg: ExperimentConfig, point: int, trial: int) -> TrialRecord:
    """One network, the selected algorithms, and the derived per-trial quantities.

    Optimal and sub-optimal come from the same search, so asking for either
    runs both; b_m is only known when that search ran.
    """
    net = generate(cfg.gen_spec(point), key=(point, trial))
    algs = _computed(cfg)
    assignments, costs = {}, {}
    bm = None
    if "optimal" in algs or "suboptimal" in algs:
        opt = optimal_assign(net, cfg.alpha)
        sub = opt.suboptimal
        assignments["optimal"] = opt.assignment
        assignments["suboptimal"] = sub.assignment if sub is not None else opt.assignment
        costs["optimal"] = opt.cost
        costs["suboptimal"] = sub.cost if sub is not None else opt.cost
        bm = opt.bm
    if "distributed" in algs:
        assignments["distributed"] = distributed_assign(net)
        costs["distributed"] = assignment_cost(assignments["distributed"], cfg.alpha)
    if cfg.audit or trial % 100 == 0:
        for name, r in assignments.items():
            if not validate_broadcast(net, r).complete:
                raise AssertionError(f"{name} assignment failed broadcast on trial {point}/{trial}")
    bm_d = distance(net, bm, net.source) if bm is not None else None
    nd = {pair_key(a, b): normalized_difference(costs[a], costs[b]) for a, b in PAIRS if a in costs and b in costs}
    return TrialRecord(point, trial, net.n, net.source, net.length, costs, bm, bm_d, nd)


def _run_chunk(args) -> List[TrialRecord]:
    cfg, point, trials = args
    return [run_trial(cfg, point, t) for t in trials]


def run_trials(cfg: ExperimentConfig) -> List[List[TrialRecord]]:
    """Trial records per grid point, in trial order."""
    out = []
    for p in range(len(cfg.lambdas)):
        if cfg.workers == 1:
            out.append(_run_chunk((cfg, p, range(cfg.trials))))
            continue
        step = math.ceil(cfg.trials / (cfg.workers * 4))
        chunks = [(cfg, p, range(i, min(i + step, cfg.trials))) for i in range(0, cfg.trials, step)]
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            out.append([rec for part in pool.map(_run_chunk, chunks) for rec in part])
    return out


@dataclass
class PointSummary:
    lam: float
    n: int
    trials: int
    mean: Dict[str, float]
    stderr: Dict[str, float]
    identical: Dict[str, float]
    analytic: Optional[float]


@dataclass
class Histogram:
    edges: List[float]
    counts: List[int]
    summary: Dict[str, float]


@dataclass
class SweepReport:
    kind: str  # "sweep" | "histogram"
    config: dict
    points: List[PointSummary]
    histogram: Optional[Histogram] = None
    label: str = ""
    records: Optional[List[List[TrialRecord]]] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "config": self.config, "points": [asdict(p) for p in self.points]}
        if self.histogram is not None:
            d["histogram"] = asdict(self.histogram)
        if self.label:
            d["label"] = self.label
        return d


def _identical_label(pc: float) -> str:
    return f"identical_pc{pc:g}"


def summarize(cfg: ExperimentConfig, records: List[List[TrialRecord]]) -> List[PointSummary]:
    points = []
    for p, recs in enumerate(records):
        lam = cfg.lambdas[p]
        n = recs[0].n
        mean, stderr = {}, {}
        for alg in _computed(cfg):
            c = np.array([r.costs[alg] for r in recs])
            mean[alg] = float(c.mean())
            stderr[alg] = float(c.std(ddof=1) / math.sqrt(c.size)) if c.size > 1 else 0.0
        identical = {}
        span = cfg.length if cfg.mode == "uniform" else n / lam
        for pc in cfg.pcs:
            try:
                radius, _ = identical_range(pc, lam, span)
            except NetworkError:
                continue
            identical[_identical_label(pc)] = identical_cost(n, radius, cfg.alpha)
        try:
            analytic = expected_distributed_cost(n, lam, cfg.alpha)
        except NetworkError:
            analytic = None
        points.append(PointSummary(lam, n, len(recs), mean, stderr, identical, analytic))
    return points


def run_density_sweep(cfg: ExperimentConfig, records=None) -> SweepReport:
    records = records if records is not None else run_trials(cfg)
    return SweepReport("sweep", cfg.to_dict(), summarize(cfg, records), records=records)


def make_histogram(values: Sequence[float], bins: int, extra: Optional[dict] = None) -> Histogram:
    """Fixed-width bins over [0, max(values)]; empty input gives no bins."""
    v = np.asarray(values, dtype=float)
    summary = dict(extra or {})
    summary["samples"] = int(v.size)
    if v.size == 0:
        return Histogram([], [], summary)
    hi = float(v.max())
    counts, edges = np.histogram(v, bins=bins, range=(0.0, hi if hi > 0 else 1.0))
    summary.update(
        max=hi,
        mean=float(v.mean()),
        p50=float(np.quantile(v, 0.5)),
        p90=float(np.quantile(v, 0.9)),
        p95=float(np.quantile(v, 0.95)),
        p99=float(np.quantile(v, 0.99)),
    )
    return Histogram([float(e) for e in edges], [int(c) for c in counts], summary)


def diff_histogram(cfg: ExperimentConfig, pair: Tuple[str, str], records=None) -> SweepReport:
    if tuple(pair) not in PAIRS:
        raise NetworkError(f"pair: expected one of {[pair_key(*p) for p in PAIRS]}, got {pair_key(*pair)}")
    missing = [a for a in pair if a not in cfg.algorithms]
    if missing:
        raise NetworkError(f"algorithms: pair needs {', '.join(missing)} in the algorithm list")
    records = records if records is not None else run_trials(cfg)
    key = pair_key(*pair)
    values = [r.normdiff[key] for recs in records for r in recs]
    below = float(np.mean(np.asarray(values) < 0.10))
    hist = make_histogram(values, cfg.bins, {"fraction_below_0.1": below})
    return SweepReport("histogram", cfg.to_dict(), summarize(cfg, records), hist, f"normdiff:{key}", records)


def bm_histogram(cfg: ExperimentConfig, records=None) -> SweepReport:
    """Distances d(b_m, source) over the trials where b_m exists."""
    if "optimal" not in cfg.algorithms:
        raise NetworkError("algorithms: the b_m histogram needs optimal in the algorithm list")
    records = records if records is not None else run_trials(cfg)
    flat = [r for recs in records for r in recs]
    values = [r.bm_distance for r in flat if r.bm is not None]
    rel = [r.bm_distance / r.length for r in flat if r.bm is not None]
    extra = {
        "no_bm_fraction": float(sum(r.bm is None for r in flat) / len(flat)),
        "max_relative_distance": float(max(rel)) if rel else 0.0,
    }
    hist = make_histogram(values, cfg.bins, extra)
    return SweepReport("histogram", cfg.to_dict(), summarize(cfg, records), hist, "bm_distance", records)


def sweep_rows(report: SweepReport) -> List[tuple]:
    algs = report.config["algorithms"]
    seed = report.config["seed"]
    rows = []
    for p in report.points:
        for alg in algs:
            if alg == "analytic":
                if p.analytic is not None:
                    rows.append((p.lam, "analytic", p.analytic, 0.0, p.trials, seed))
                continue
            rows.append((p.lam, alg, p.mean[alg], p.stderr[alg], p.trials, seed))
        for label, cost in p.identical.items():
            rows.append((p.lam, label, cost, 0.0, p.trials, seed))
    return rows


def report_text(report: SweepReport, fmt: str = "csv") -> str:
    if fmt == "json":
        return dumps(report.to_dict()) + "\n"
    if fmt != "csv":
        raise NetworkError(f"format: expected csv or json, got {fmt!r}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if report.kind == "histogram":
        w.writerow(HIST_COLUMNS)
        h = report.histogram
        for lo, hi, c in zip(h.edges[:-1], h.edges[1:], h.counts):
            w.writerow((fmt_float(lo), fmt_float(hi), c))
    else:
        w.writerow(SWEEP_COLUMNS)
        for lam, alg, mean, se, trials, seed in sweep_rows(report):
            w.writerow((fmt_float(lam), alg, fmt_float(mean), fmt_float(se), trials, seed))
    return buf.getvalue()


def emit_report(report: SweepReport, fmt: str = "csv", path=None):
    write_text(report_text(report, fmt), path)
