"""Range-assignment algorithms for broadcasting on a line.

* :func:`suboptimal_assign` - linear-time assignment that lets the single
  best opposite-side coverer on one side silence nodes on the other side.
* :func:`optimal_assign` - O(N^2) exact search over the one node allowed
  to transmit beyond its minimum range.
* :func:`distributed_assign` - every node forwards to its next neighbour.
* :func:`identical_range` and :func:`expected_distributed_cost` - closed
  forms for the common-radius baseline and the distributed rule's mean cost
  under exponential gaps.

Node indices are 0-based; the source is ``net.source``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .network import (
    LinearNetwork,
    NetworkError,
    RangeAssignment,
    SideMinima,
    assignment_cost,
    edge_source_assignment,
    exponent,
    min_positive_ranges,
)

LEFT, RIGHT = "left", "right"

# Candidate costs are prefix sums in a different order from the sub-optimal
# cost; a candidate must win by more than rounding noise to replace it.
IMPROVEMENT_RTOL = 1e-12


def _require_interior(net: LinearNetwork):
    if not net.interior_source:
        raise NetworkError(
            f"source: interior source required (0 < source < {net.n - 1}), got {net.source}"
        )


@dataclass(frozen=True)
class CoverageAnalysis:
    """How far each node's mandatory transmission reaches past the source.

    ``cov`` is NaN at the end nodes and at the source; the source's two
    values live in ``cov_source_left`` / ``cov_source_right``.
    """

    cov: np.ndarray
    cov_source_left: float
    cov_source_right: float
    mL: int
    mR: int
    lL: int
    lR: int


def opposite_coverage(net: LinearNetwork, minima: Optional[SideMinima] = None) -> CoverageAnalysis:
    _require_interior(net)
    mins = minima if minima is not None else min_positive_ranges(net)
    x = net.positions
    n, s = net.n, net.source

    cov = np.full(n, np.nan)
    inner = np.r_[1:s, s + 1 : n - 1]
    cov[inner] = mins.m[inner] - np.abs(x[inner] - x[s])

    # argmax with ties going to the node nearest the source
    mL, best = s, mins.source_left
    for i in range(s - 1, 0, -1):
        if cov[i] > best:
            mL, best = i, cov[i]
    mR, best = s, mins.source_right
    for i in range(s + 1, n - 1):
        if cov[i] > best:
            mR, best = i, cov[i]

    # extreme receivers tested as d(m, j) <= M(m), the exact coverage rule
    reach_l = mins.source_left if mL == s else float(mins.m[mL])
    lR = s
    while lR + 1 < n and x[lR + 1] - x[mL] <= reach_l:
        lR += 1
    reach_r = mins.source_right if mR == s else float(mins.m[mR])
    lL = s
    while lL - 1 >= 0 and x[mR] - x[lL - 1] <= reach_r:
        lL -= 1
    return CoverageAnalysis(cov, mins.source_left, mins.source_right, mL, mR, lL, lR)


@dataclass(frozen=True)
class SuboptimalResult:
    assignment: RangeAssignment
    cost: float
    cost_r: float
    cost_l: float
    cost_star: float
    branch: str  # "right" when cost_r <= cost_l
    silenced: Tuple[int, ...]
    coverage: CoverageAnalysis

    def __iter__(self):
        return iter((self.assignment, self.cost))


def suboptimal_assign(net: LinearNetwork, alpha=2.0) -> SuboptimalResult:
    _require_interior(net)
    a = exponent(alpha)
    mins = min_positive_ranges(net)
    cover = opposite_coverage(net, mins)
    n, s = net.n, net.source
    p = mins.m**a
    p_left = mins.source_left**a
    p_right = mins.source_right**a

    others = float(p[:s].sum() + p[s + 1 :].sum())
    cost_star = max(mins.source_left, mins.source_right) ** a + others
    if cover.lR == s:
        cost_r = cost_star
    else:
        cost_r = float(p[:s].sum()) + p_left + float(p[cover.lR :].sum())
    if cover.lL == s:
        cost_l = cost_star
    else:
        cost_l = float(p[: cover.lL + 1].sum()) + p_right + float(p[s + 1 :].sum())

    r = np.array(mins.m, dtype=float)
    if cost_r <= cost_l:
        branch, cost = RIGHT, cost_r
        if cover.lR != s:
            r[s] = mins.source_left
            r[s + 1 : cover.lR] = 0.0
            silenced = tuple(range(s + 1, cover.lR))
        else:
            silenced = ()
    else:
        branch, cost = LEFT, cost_l
        if cover.lL != s:
            r[s] = mins.source_right
            r[cover.lL + 1 : s] = 0.0
            silenced = tuple(range(cover.lL + 1, s))
        else:
            silenced = ()
    return SuboptimalResult(r, float(cost), float(cost_r), float(cost_l), float(cost_star), branch, silenced, cover)


@dataclass(frozen=True)
class CostArrays:
    """Prefix energies with two source slots.

    Slot ``i`` holds node ``i`` for ``i < source`` and the source's left
    role at ``i == source``; slot ``i + 1`` holds node ``i`` for
    ``i > source`` and the right role at ``i == source``.
    """

    c_s: np.ndarray
    c_e: np.ndarray
    source: int

    def slot(self, i: int, side: Optional[str] = None) -> int:
        if i < self.source or (i == self.source and side == LEFT):
            return i
        if i > self.source or (i == self.source and side == RIGHT):
            return i + 1
        raise ValueError("side must be given for the source")


def build_cost_arrays(net: LinearNetwork, minima: Optional[SideMinima] = None, alpha=2.0) -> CostArrays:
    _require_interior(net)
    a = exponent(alpha)
    mins = minima if minima is not None else min_positive_ranges(net)
    n, s = net.n, net.source
    ml = [float(v) ** a for v in mins.m]
    ml[s] = mins.source_left**a
    mr = [float(v) ** a for v in mins.m]
    mr[s] = mins.source_right**a

    c_s = np.zeros(n + 1)
    c_e = np.zeros(n + 1)
    # left roles occupy slots 0..s, right roles slots s+1..n
    for i in range(s - 1, -1, -1):
        c_s[i] = c_s[i + 1] + ml[i + 1]
    for i in range(s + 1, n):
        c_s[i + 1] = c_s[i] + mr[i - 1]
    for i in range(1, s + 1):
        c_e[i] = c_e[i - 1] + ml[i]
    for i in range(n - 2, s - 1, -1):
        c_e[i + 1] = c_e[i + 2] + mr[i]
    return CostArrays(c_s, c_e, s)


@dataclass
class ReceiverMatrix:
    """Last same-side (``rs``) and other-side (``ro``) receiver of each node.

    For the source, ``rs`` is the right extreme and ``ro`` the left one.
    """

    rs: np.ndarray
    ro: np.ndarray

    def copy(self) -> "ReceiverMatrix":
        return ReceiverMatrix(self.rs.copy(), self.ro.copy())


def _directions(b: int, s: int) -> Tuple[int, int]:
    """Outward steps for the same-side and other-side frontiers of node b."""
    if b < s:
        return -1, 1
    if b > s:
        return 1, -1
    return 1, -1


def _furthest(x, b: int, start: int, step: int, radius: float) -> int:
    j = start
    n = len(x)
    while 0 <= j + step < n and abs(x[j + step] - x[b]) <= radius:
        j += step
    return j


def _initial_receivers(x, s: int, b: int, cover: CoverageAnalysis) -> Tuple[int, int]:
    radius = max(abs(x[b] - x[cover.lL]), abs(x[b] - x[cover.lR]))
    step_s, step_o = _directions(b, s)
    rs = _furthest(x, b, b, step_s, radius)
    ro = _furthest(x, b, s, step_o, radius)
    return rs, ro


def init_receiver_matrix(net: LinearNetwork, coverage: Optional[CoverageAnalysis] = None) -> ReceiverMatrix:
    _require_interior(net)
    cover = coverage if coverage is not None else opposite_coverage(net)
    x, s = net.positions.tolist(), net.source
    rs = np.zeros(net.n, dtype=int)
    ro = np.zeros(net.n, dtype=int)
    for b in range(net.n):
        rs[b], ro[b] = _initial_receivers(x, s, b, cover)
    return ReceiverMatrix(rs, ro)


@dataclass(frozen=True)
class OptimalResult:
    assignment: RangeAssignment
    cost: float
    bm: Optional[int] = None
    bm_receivers: Optional[Tuple[int, int]] = None  # (rO, rS)
    suboptimal: Optional[SuboptimalResult] = field(default=None, repr=False)
    search_cost: Optional[float] = None

    def __iter__(self):
        return iter((self.assignment, self.cost))


def _apply_chain(r: np.ndarray, mins: SideMinima, s: int, lo: int, hi: int, side: str):
    """Give nodes lo..hi their minimum range for ``side`` (keeps larger values)."""
    for i in range(lo, hi + 1):
        r[i] = max(r[i], mins.side_value(i, s, side))


def _reconstruct(net: LinearNetwork, mins: SideMinima, bm: int, ro: int, rs: int) -> np.ndarray:
    x, n, s = net.positions, net.n, net.source
    r = np.zeros(n)
    if bm < s:
        _apply_chain(r, mins, s, bm + 1, s, LEFT)
        _apply_chain(r, mins, s, 0, rs, LEFT)
        _apply_chain(r, mins, s, ro, n - 1, RIGHT)
    elif bm > s:
        _apply_chain(r, mins, s, s, bm - 1, RIGHT)
        _apply_chain(r, mins, s, rs, n - 1, RIGHT)
        _apply_chain(r, mins, s, 0, ro, LEFT)
    else:
        _apply_chain(r, mins, s, rs, n - 1, RIGHT)
        _apply_chain(r, mins, s, 0, ro, LEFT)
    r[bm] = max(r[bm], abs(x[bm] - x[ro]), abs(x[bm] - x[rs]))
    return r


def optimal_assign(net: LinearNetwork, alpha=2.0, prune: bool = True) -> OptimalResult:
    """Minimum-energy assignment.

    Starts from the sub-optimal cost and, for every candidate node b, widens
    b's radius one receiver at a time (nearest next neighbour first) looking
    for a cheaper single over-range node. With ``prune`` a candidate is
    abandoned once ``C_S[b] + radius**alpha`` alone reaches the best cost; no
    later state of that candidate can beat it, so results are unchanged.
    """
    a = exponent(alpha)
    if not net.interior_source:
        r = edge_source_assignment(net)
        return OptimalResult(r, assignment_cost(r, a))

    sub = suboptimal_assign(net, a)
    mins = min_positive_ranges(net)
    cover = sub.coverage
    arrays = build_cost_arrays(net, mins, a)
    lr = None if prune else init_receiver_matrix(net, cover)
    x, n, s = net.positions.tolist(), net.n, net.source
    c_s = arrays.c_s.tolist()
    # C_E per role: index by node, the source entry being that side's role
    ce = {LEFT: arrays.c_e[: s + 1].tolist(), RIGHT: [0.0] * s + arrays.c_e[s + 1 :].tolist()}
    lL, lR = cover.lL, cover.lR

    best = sub.cost
    found = None
    for b in range(n):
        step_s, step_o = _directions(b, s)
        if b == s:
            cs_b, side_s, side_o = 0.0, RIGHT, LEFT
        else:
            cs_b = c_s[arrays.slot(b)]
            side_s, side_o = (LEFT, RIGHT) if b < s else (RIGHT, LEFT)
        ce_s, ce_o = ce[side_s], ce[side_o]
        xb = x[b]
        if lr is None:
            radius0 = max(abs(xb - x[lL]), abs(xb - x[lR]))
            if cs_b + radius0**a >= best:
                continue
            rs, ro = _initial_receivers(x, s, b, cover)
        else:
            rs, ro = int(lr.rs[b]), int(lr.ro[b])

        while True:
            head = cs_b + max(abs(xb - x[ro]), abs(xb - x[rs])) ** a
            if prune and head >= best:
                break
            cost = head + ce_s[rs] + ce_o[ro]
            if cost < best * (1.0 - IMPROVEMENT_RTOL):
                best, found = cost, (b, ro, rs)
            nan_s = rs + step_s if 0 <= rs + step_s < n else None
            nan_o = ro + step_o if 0 <= ro + step_o < n else None
            if nan_s is None and nan_o is None:
                break
            if nan_o is None:
                rs = nan_s
            elif nan_s is None:
                ro = nan_o
            else:
                dn_s = abs(xb - x[nan_s])
                dn_o = abs(xb - x[nan_o])
                if dn_s <= dn_o:
                    rs = nan_s
                if dn_o <= dn_s:
                    ro = nan_o

    if found is None:
        return OptimalResult(sub.assignment, sub.cost, suboptimal=sub, search_cost=sub.cost)
    bm, ro, rs = found
    r = _reconstruct(net, mins, bm, ro, rs)
    return OptimalResult(r, assignment_cost(r, a), bm, (ro, rs), sub, float(best))


def distributed_assign(net: LinearNetwork) -> RangeAssignment:
    """Source at the larger neighbour gap, everyone else at its away-side gap."""
    return np.array(min_positive_ranges(net).m, dtype=float)


def identical_range(pc: float, lam: float, length: float) -> Tuple[float, float]:
    """Common radius keeping an exponential-gap line connected with probability pc.

    Returns ``(exact, approx)``: the bound taken with equality and its
    large-``lam * length`` approximation.
    """
    if not 0.0 < pc < 1.0:
        raise NetworkError(f"pc: connectivity probability must lie in (0, 1), got {pc}")
    if lam <= 0 or length <= 0:
        raise NetworkError("lambda/length: must be positive")
    nl = lam * length
    if nl <= 1.0:
        raise NetworkError(f"lambda*length: must exceed 1, got {nl}")
    exact = -math.log(-math.expm1(math.log(pc) / (nl - 1.0))) / lam
    approx = math.log(-nl / math.log(pc)) / lam
    return exact, approx


def identical_cost(n: int, radius: float, alpha=2.0) -> float:
    """All n nodes transmit at the common radius."""
    return n * radius ** exponent(alpha)


def expected_distributed_cost(n: int, lam: float, alpha=2) -> float:
    """Mean distributed cost for an interior source and i.i.d. exp(lam) gaps."""
    a = exponent(alpha)
    if a != int(a):
        raise NetworkError(f"alpha: closed form needs an integer exponent, got {a}")
    if n < 3:
        raise NetworkError(f"n: closed form assumes an interior source, need n >= 3, got {n}")
    if lam <= 0:
        raise NetworkError(f"lambda: must be positive, got {lam}")
    k = int(a)
    return math.factorial(k) / lam**k * (n - 1 - 2.0**-k)
