"""Seeded network generators.

Randomness comes from numpy's PCG64 bit generator seeded through
``SeedSequence(seed, spawn_key=key)``. The spawn key is the trial
coordinate (for sweeps ``(grid_point, trial)``), so every trial owns an
independent stream that does not depend on how trials are scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .network import LinearNetwork, NetworkError

MODES = ("uniform", "expgap", "adv_a", "adv_b")
SourcePolicy = Union[str, int]  # "random", "center" or a fixed index


def make_rng(seed: int, key: Sequence[int] = ()) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class GenSpec:
    mode: str = "uniform"
    n: int = 10
    length: float = 1000.0
    lam: float = 0.01
    seed: int = 0
    source_policy: SourcePolicy = "random"
    r1: float = 102.0
    r2: float = 100.0
    eps1: float = 1.0
    eps2: Optional[float] = None  # defaults to eps1

    def __post_init__(self):
        if self.eps2 is None:
            object.__setattr__(self, "eps2", self.eps1)
        if self.mode not in MODES:
            raise NetworkError(f"mode: expected one of {', '.join(MODES)}, got {self.mode!r}")
        if self.mode in ("uniform", "expgap") and self.n < 2:
            raise NetworkError(f"n: need at least 2 nodes, got {self.n}")
        if self.mode == "uniform" and not self.length > 0:
            raise NetworkError(f"length: must be positive, got {self.length}")
        if self.mode == "expgap" and not self.lam > 0:
            raise NetworkError(f"lambda: must be positive, got {self.lam}")
        p = self.source_policy
        if not (p in ("random", "center") or (isinstance(p, int) and not isinstance(p, bool))):
            raise NetworkError(f"source: policy must be random, center or an index, got {p!r}")


def _pick_source(rng: np.random.Generator, n: int, policy: SourcePolicy) -> int:
    if policy == "random":
        if n < 3:
            return 0
        return int(rng.integers(1, n - 1))
    if policy == "center":
        return (n - 1) // 2
    if not 0 <= policy < n:
        raise NetworkError(f"source: index {policy} outside 0..{n - 1}")
    return int(policy)


def uniform_network(spec: GenSpec, key: Sequence[int] = ()) -> LinearNetwork:
    """n i.i.d. uniform points on [0, length], sorted; coincident draws redrawn."""
    if spec.mode != "uniform":
        raise NetworkError(f"mode: uniform_network needs mode uniform, got {spec.mode}")
    rng = make_rng(spec.seed, key)
    x = np.sort(rng.uniform(0.0, spec.length, spec.n))
    while np.any(np.diff(x) <= 0):
        x = np.sort(rng.uniform(0.0, spec.length, spec.n))
    return LinearNetwork(x, _pick_source(rng, spec.n, spec.source_policy))


def exponential_gap_network(spec: GenSpec, key: Sequence[int] = ()) -> LinearNetwork:
    """First node at 0, then n-1 i.i.d. exp(lam) gaps."""
    if spec.mode != "expgap":
        raise NetworkError(f"mode: exponential_gap_network needs mode expgap, got {spec.mode}")
    rng = make_rng(spec.seed, key)
    while True:
        gaps = rng.exponential(1.0 / spec.lam, spec.n - 1)
        x = np.concatenate(([0.0], np.cumsum(gaps)))
        if np.all(np.diff(x) > 0):
            break
    return LinearNetwork(x, _pick_source(rng, spec.n, spec.source_policy))


def adversarial_network(spec: GenSpec) -> LinearNetwork:
    """Layouts where the simpler algorithms lose close to 100% energy.

    ``adv_a``: ``[0, r2, r2+eps1, r2+eps1+r1]``, source 1 (sub-optimal beats
    distributed). ``adv_b``: ``[0, r2, r2+eps1, r2+eps1+eps2,
    r2+eps1+eps2+r1]``, source 2 (optimal beats sub-optimal).
    """
    r1, r2, e1, e2 = spec.r1, spec.r2, spec.eps1, spec.eps2
    if min(r1, r2, e1, e2) <= 0:
        raise NetworkError("r1/r2/eps1/eps2: must be positive")
    if spec.mode == "adv_a":
        if not r1 >= r2 + e1 + e2:
            raise NetworkError(f"r1: adv_a requires r1 >= r2 + eps1 + eps2 ({r1} < {r2 + e1 + e2})")
        return LinearNetwork([0.0, r2, r2 + e1, r2 + e1 + r1], 1)
    if spec.mode == "adv_b":
        if not r1 <= r2 + e1 + e2:
            raise NetworkError(f"r1: adv_b requires r1 <= r2 + eps1 + eps2 ({r1} > {r2 + e1 + e2})")
        if not r1 + e1 >= r2 + e2:
            raise NetworkError(f"r1: adv_b requires r1 + eps1 >= r2 + eps2 ({r1 + e1} < {r2 + e2})")
        return LinearNetwork([0.0, r2, r2 + e1, r2 + e1 + e2, r2 + e1 + e2 + r1], 2)
    raise NetworkError(f"mode: adversarial_network needs adv_a or adv_b, got {spec.mode}")


def generate(spec: GenSpec, key: Sequence[int] = ()) -> LinearNetwork:
    if spec.mode == "uniform":
        return uniform_network(spec, key)
    if spec.mode == "expgap":
        return exponential_gap_network(spec, key)
    return adversarial_network(spec)
