"""Exhaustive minimum-energy search for small networks.

Each node's radius only matters through the set of nodes it reaches, so
``{0} U {d(i, j)}`` is a complete candidate set. The oracle walks the full
N-fold product of those candidates, keeps the feasible combinations and
returns the cheapest, breaking cost ties by the lexicographically smallest
range vector.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .network import (
    LinearNetwork,
    NetworkError,
    RangeAssignment,
    assignment_cost,
    exponent,
    min_positive_ranges,
)

MAX_N = 10
_BLOCK = 1 << 20  # combinations evaluated per vectorised block
_BATCH = 2048  # feasibility checks per batch


@dataclass(frozen=True)
class OracleConfig:
    max_n: int = 8
    alpha: float = 2.0

    def __post_init__(self):
        if not 2 <= self.max_n <= MAX_N:
            raise NetworkError(f"max_n: must lie in 2..{MAX_N}, got {self.max_n}")
        exponent(self.alpha)


def candidate_ranges(net: LinearNetwork) -> list:
    d = net.distance_matrix()
    return [np.unique(d[i]) for i in range(net.n)]  # sorted, includes 0 = d(i, i)


def _feasible(reach_tables, digits: np.ndarray, source: int) -> np.ndarray:
    """Vectorised broadcast check for a batch of candidate digit rows."""
    n = digits.shape[1]
    # reach[k, i, j]: node i, using its candidate digits[k, i], reaches node j
    reach = np.stack([reach_tables[i][digits[:, i]] for i in range(n)], axis=1)
    informed = np.zeros(digits.shape, dtype=bool)
    informed[:, source] = True
    for _ in range(n - 1):
        heard = informed | np.any(informed[:, :, None] & reach, axis=1)
        if np.array_equal(heard, informed):
            break
        informed = heard
    return informed.all(axis=1)


def brute_force_optimal(net: LinearNetwork, cfg: OracleConfig = OracleConfig()) -> Tuple[RangeAssignment, float]:
    n = net.n
    if n > cfg.max_n:
        raise NetworkError(f"n: {n} nodes exceed oracle cap max_n={cfg.max_n}")
    a = exponent(cfg.alpha)
    cands = candidate_ranges(net)
    sizes = [c.size for c in cands]
    powers = [c**a for c in cands]
    dist = net.distance_matrix()
    reach_tables = [dist[i][None, :] <= cands[i][:, None] for i in range(n)]

    # split digits: an outer prefix looped in Python, an inner block vectorised
    split = n
    while split > 0 and int(np.prod(sizes[split - 1 :])) <= _BLOCK:
        split -= 1
    inner_sizes = sizes[split:]
    inner_cost = np.zeros(inner_sizes if inner_sizes else ())
    for k, p in enumerate(powers[split:]):
        shape = [1] * len(inner_sizes)
        shape[k] = p.size
        inner_cost = inner_cost + p.reshape(shape)
    inner_cost = inner_cost.ravel()

    # any feasible assignment bounds the search; the distributed one always is
    bound = float(np.sum(min_positive_ranges(net).m ** a))
    bound = bound * (1 + 1e-9) + 1e-300
    best_cost, best_digits = np.inf, None

    for prefix in itertools.product(*[range(k) for k in sizes[:split]]):
        base = sum(powers[i][d] for i, d in enumerate(prefix))
        costs = base + inner_cost
        limit = min(bound, best_cost)
        idx = np.flatnonzero(costs <= limit)
        if idx.size == 0:
            continue
        idx = idx[np.argsort(costs[idx], kind="stable")]
        for start in range(0, idx.size, _BATCH):
            chunk = idx[start : start + _BATCH]
            if costs[chunk[0]] > best_cost:
                break
            inner_digits = np.stack(np.unravel_index(chunk, inner_sizes), axis=1) if inner_sizes else np.zeros((chunk.size, 0), int)
            digits = np.hstack([np.tile(np.array(prefix, dtype=int), (chunk.size, 1)), inner_digits])
            ok = _feasible(reach_tables, digits, net.source)
            if not ok.any():
                continue
            c = costs[chunk[ok]]
            cmin = c.min()
            # ties: stable sort keeps flat (lexicographic) order within equal costs,
            # and earlier prefixes are lexicographically smaller
            if cmin < best_cost:
                first = np.flatnonzero(ok)[np.argmax(c == cmin)]
                best_cost, best_digits = cmin, digits[first]
            break

    if best_digits is None:  # unreachable: the distributed assignment is feasible
        raise RuntimeError("oracle found no feasible assignment")
    r = np.array([cands[i][d] for i, d in enumerate(best_digits)])
    return r, assignment_cost(r, a)
