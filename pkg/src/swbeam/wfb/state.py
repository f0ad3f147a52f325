"""Per-node protocol state and the records the protocol emits."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import InvalidParameterError
from ..types import NodeId, Point

INITIAL_W = 1.0
# one virtual self-packet keeps every denominator positive from the first slot
INITIAL_G = 1


@dataclass(slots=True)
class NeighborRecord:
    """What a node last overheard from one neighbour."""

    w: float
    g: int
    position: Point
    max_hop_count: int
    last_seen_slot: int


@dataclass(slots=True)
class WfbNodeState:
    node: NodeId
    position: Point
    w: float = INITIAL_W
    g: int = INITIAL_G
    neighbor_table: dict[NodeId, NeighborRecord] = field(default_factory=dict)
    beamformed: bool = False
    suppressed: bool = False

    def heard_neighbors(self) -> list[NodeId]:
        return sorted(self.neighbor_table)


@dataclass(frozen=True, slots=True)
class Flow:
    """A single packet travelling ``route`` from ``source`` to ``destination``."""

    source: NodeId
    destination: NodeId
    route: tuple[NodeId, ...]

    def __post_init__(self) -> None:
        if self.source == self.destination:
            raise InvalidParameterError(f"flow source and destination are both {self.source}")
        if (
            len(self.route) < 2
            or self.route[0] != self.source
            or self.route[-1] != self.destination
        ):
            raise InvalidParameterError(
                f"route {self.route} does not run from {self.source} to {self.destination}"
            )

    @property
    def hops(self) -> int:
        return len(self.route) - 1


@dataclass(frozen=True, slots=True)
class ScheduledTransmission:
    slot: int
    transmitter: NodeId
    flow: Flow
    hop_index: int


@dataclass(frozen=True, slots=True)
class SlotEvent:
    """A transmission and the values the transmitter attached to it."""

    slot: int
    transmitter: NodeId
    flow_src: NodeId
    flow_dst: NodeId
    hop_index: int
    w_after: float
    g_after: int


@dataclass(frozen=True, slots=True)
class DecisionRecord:
    """Outcome of one node's turn in the decision phase.

    ``suppressor`` is the earlier beamformer that silenced the node, if any;
    ``orientation`` and ``theta`` are NaN unless the node beamformed.
    """

    order: int
    node: NodeId
    w: float
    decision: bool
    suppressor: NodeId | None
    orientation: float
    theta: float
