"""Synchronous-round simulation of the distributed forwarding rule.

Each node knows only the gaps to its two adjacent neighbours. A node that
hears the message from an adjacent neighbour forwards it once, at the gap
on its other side; the source opens round 0 at the larger of its two gaps.
Transmissions in a round see only the state left by earlier rounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .network import LinearNetwork, RangeAssignment, validate_broadcast


@dataclass
class NodeState:
    known_left_gap: Optional[float]  # None at the left end
    known_right_gap: Optional[float]  # None at the right end
    is_source: bool = False
    informed: bool = False
    transmitted: bool = False
    chosen_range: float = 0.0


def decide(state: NodeState, heard_from: Optional[str]) -> Optional[float]:
    """Range a node transmits at after hearing from ``heard_from``, or None.

    ``heard_from`` is ``"left"``/``"right"`` for a reception from that
    adjacent neighbour, ``None`` for the source's own start. Only the node's
    local fields are consulted.
    """
    if state.transmitted:
        return None
    left, right = state.known_left_gap, state.known_right_gap
    if state.is_source:
        return max(left or 0.0, right or 0.0)
    away = right if heard_from == "left" else left
    if away is None:  # end node: nobody further out
        return None
    return away


@dataclass
class ProtocolTrace:
    rounds: List[List[Tuple[int, float]]]
    assignment: RangeAssignment
    informed: np.ndarray = field(repr=False)

    @property
    def n_rounds(self) -> int:
        return len(self.rounds)

    def to_dict(self) -> dict:
        return {
            "rounds": [[{"node": i, "range": r} for i, r in rnd] for rnd in self.rounds],
            "assignment": [float(v) for v in self.assignment],
        }


def local_states(net: LinearNetwork) -> List[NodeState]:
    gaps = np.diff(net.positions).tolist()
    n = net.n
    return [
        NodeState(
            known_left_gap=gaps[i - 1] if i > 0 else None,
            known_right_gap=gaps[i] if i < n - 1 else None,
            is_source=(i == net.source),
        )
        for i in range(n)
    ]


def run_protocol(net: LinearNetwork) -> ProtocolTrace:
    x = net.positions
    n = net.n
    states = local_states(net)
    src = states[net.source]
    src.informed = True
    pending = {net.source: None}  # node -> side it heard an adjacent neighbour on
    rounds = []

    while pending:
        sent = []
        for i in sorted(pending):
            r = decide(states[i], pending[i])
            if r is None:
                continue
            states[i].transmitted = True
            states[i].chosen_range = r
            sent.append((i, r))
        if not sent:
            break
        rounds.append(sent)
        triggered = {}
        for i, r in sent:
            for j in range(n):
                if j == i or abs(x[j] - x[i]) > r:
                    continue
                states[j].informed = True
                if abs(j - i) == 1 and not states[j].transmitted and j not in triggered:
                    triggered[j] = "left" if i < j else "right"
        pending = triggered

    ranges = np.array([st.chosen_range for st in states])
    informed = np.array([st.informed for st in states])
    if not informed.all() or not validate_broadcast(net, ranges).complete:
        raise AssertionError("distributed protocol left nodes uninformed")
    return ProtocolTrace(rounds, ranges, informed)
