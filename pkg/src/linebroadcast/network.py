"""Linear network model, geometry, energy cost and broadcast reachability.

Nodes are indexed from 0 (left) to N-1 (right). The source splits the
interior nodes into a left side ``1..source`` and a right side
``source..N-2``; the source belongs to both sides and carries one
minimum range per side.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np

RangeAssignment = np.ndarray  # one radius per node, metres


class NetworkError(ValueError):
    """Invalid network, assignment or algorithm input."""


@dataclass(frozen=True)
class PathLoss:
    alpha: float = 2.0

    def __post_init__(self):
        if not 2.0 <= float(self.alpha) <= 6.0:
            raise NetworkError(f"alpha: path-loss exponent must lie in [2, 6], got {self.alpha}")


def exponent(alpha: Union[float, PathLoss]) -> float:
    """Validated path-loss exponent from a float or a :class:`PathLoss`."""
    if isinstance(alpha, PathLoss):
        return float(alpha.alpha)
    return float(PathLoss(alpha).alpha)


@dataclass(frozen=True, eq=False)
class LinearNetwork:
    """Ordered node coordinates on a line plus the index of the source."""

    positions: np.ndarray
    source: int

    def __post_init__(self):
        x = np.array(self.positions, dtype=float)
        if x.ndim != 1 or x.size < 2:
            raise NetworkError("positions: need at least two nodes")
        if not np.all(np.isfinite(x)):
            raise NetworkError("positions: coordinates must be finite")
        if not np.all(np.diff(x) > 0):
            raise NetworkError("positions: coordinates must be strictly increasing")
        if isinstance(self.source, bool) or int(self.source) != self.source:
            raise NetworkError(f"source: expected an integer index, got {self.source!r}")
        if not 0 <= int(self.source) < x.size:
            raise NetworkError(f"source: index {self.source} outside 0..{x.size - 1}")
        x.setflags(write=False)
        object.__setattr__(self, "positions", x)
        object.__setattr__(self, "source", int(self.source))

    @property
    def n(self) -> int:
        return int(self.positions.size)

    @property
    def length(self) -> float:
        return float(self.positions[-1] - self.positions[0])

    @property
    def interior_source(self) -> bool:
        return 0 < self.source < self.n - 1

    def __eq__(self, other):
        if not isinstance(other, LinearNetwork):
            return NotImplemented
        return self.source == other.source and np.array_equal(self.positions, other.positions)

    def __hash__(self):
        return hash((self.source, self.positions.tobytes()))

    def mirrored(self) -> "LinearNetwork":
        """Reflect x -> x_max - x (indices reverse)."""
        x = self.positions
        return LinearNetwork(x[-1] - x[::-1], self.n - 1 - self.source)

    def scaled(self, t: float) -> "LinearNetwork":
        return LinearNetwork(self.positions * t, self.source)

    def distance_matrix(self) -> np.ndarray:
        x = self.positions
        return np.abs(x[:, None] - x[None, :])

    def to_dict(self) -> dict:
        return {"positions": [float(v) for v in self.positions], "source": self.source}

    @classmethod
    def from_dict(cls, data: dict) -> "LinearNetwork":
        if not isinstance(data, dict):
            raise NetworkError("network: expected a JSON object")
        for key in ("positions", "source"):
            if key not in data:
                raise NetworkError(f"{key}: missing field")
        pos = data["positions"]
        if not isinstance(pos, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in pos
        ):
            raise NetworkError("positions: expected a list of numbers")
        src = data["source"]
        if not isinstance(src, int) or isinstance(src, bool):
            raise NetworkError(f"source: expected an integer index, got {src!r}")
        return cls(np.asarray(pos, dtype=float), src)


def load_network(path: Union[str, Path]) -> LinearNetwork:
    """Read a network JSON file. ``OSError`` propagates; bad content raises NetworkError."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkError(f"network: malformed JSON in {path}: {exc.msg}") from None
    return LinearNetwork.from_dict(data)


def distance(net: LinearNetwork, i: int, j: int) -> float:
    n = net.n
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"node index out of range 0..{n - 1}: ({i}, {j})")
    return abs(float(net.positions[i]) - float(net.positions[j]))


@dataclass(frozen=True)
class SideMinima:
    """Minimum positive range M(i) of every node.

    ``m[source]`` holds the larger of the two source duties, which is the
    range the source needs when it serves both sides.
    """

    m: np.ndarray
    source_left: float
    source_right: float

    def side_value(self, i: int, source: int, side: str) -> float:
        if i == source:
            return self.source_left if side == "left" else self.source_right
        return float(self.m[i])


def min_positive_ranges(net: LinearNetwork) -> SideMinima:
    x = net.positions
    n, s = net.n, net.source
    m = np.zeros(n)
    gaps = np.diff(x)
    # left side looks left (gap i-1), right side looks right (gap i)
    m[1:s] = gaps[: max(s - 1, 0)]
    m[s + 1 : n - 1] = gaps[s + 1 : n - 1]
    left = float(gaps[s - 1]) if s > 0 else 0.0
    right = float(gaps[s]) if s < n - 1 else 0.0
    m[s] = max(left, right)
    m.setflags(write=False)
    return SideMinima(m, left, right)


def assignment_cost(ranges, alpha: Union[float, PathLoss] = 2.0) -> float:
    """Total energy sum(R(k) ** alpha), up to the dropped constant factor."""
    a = exponent(alpha)
    r = np.asarray(ranges, dtype=float)
    if np.any(r < 0):
        raise NetworkError("ranges: negative radius")
    return float(np.sum(r**a))


@dataclass(frozen=True)
class CoverageResult:
    informed: np.ndarray
    rounds: int

    @property
    def complete(self) -> bool:
        return bool(self.informed.all())

    def __bool__(self) -> bool:
        return self.complete


def validate_broadcast(net: LinearNetwork, ranges) -> CoverageResult:
    """Propagate the source's message to a fixed point.

    Node j hears node i when ``d(i, j) <= R(i)``, compared exactly. ``rounds``
    counts the sweeps that informed at least one new node.
    """
    r = np.asarray(ranges, dtype=float)
    if r.shape != (net.n,):
        raise NetworkError(f"ranges: expected {net.n} values, got {r.size}")
    if np.any(r < 0):
        raise NetworkError("ranges: negative radius")
    reach = net.distance_matrix() <= r[:, None]
    informed = np.zeros(net.n, dtype=bool)
    informed[net.source] = True
    rounds = 0
    while True:
        heard = informed | reach[informed].any(axis=0)
        if np.array_equal(heard, informed):
            break
        informed = heard
        rounds += 1
    return CoverageResult(informed, rounds)


def edge_source_assignment(net: LinearNetwork) -> RangeAssignment:
    """Optimal chain when the source sits at either end of the line."""
    gaps = np.diff(net.positions)
    r = np.zeros(net.n)
    if net.source == 0:
        r[:-1] = gaps
    elif net.source == net.n - 1:
        r[1:] = gaps
    else:
        raise NetworkError(f"source: edge-source assignment needs source 0 or {net.n - 1}, got {net.source}")
    return r
