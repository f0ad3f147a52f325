"""Slot-by-slot forwarding of the warm-up traffic.

One node transmits per slot, so no listener ever sees two transmissions at
once. Active flows take turns in a round-robin whose starting order is drawn
from the seed; each turn advances one flow by one hop.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass

from ..log import get_logger
from ..seeds import Stream, derive_rng
from ..topology import Topology, omni_neighbors
from ..types import NodeId
from .centrality import wfb_on_overhear, wfb_on_transmit
from .state import Flow, ScheduledTransmission, SlotEvent, WfbNodeState

logger = get_logger(__name__)

FIRST_SLOT = 1


@dataclass(frozen=True, slots=True)
class WarmupResult:
    states: dict[NodeId, WfbNodeState]
    events: list[SlotEvent]


def initial_states(topo: Topology) -> dict[NodeId, WfbNodeState]:
    return {v: WfbNodeState(node=v, position=topo.positions[v]) for v in range(topo.n_nodes)}


def build_schedule(flows: Sequence[Flow], seed: int) -> list[ScheduledTransmission]:
    rng = derive_rng(seed, Stream.WARMUP)
    order = rng.permutation(len(flows)).tolist() if flows else []
    active: deque[tuple[int, int]] = deque((index, 0) for index in order)
    schedule: list[ScheduledTransmission] = []
    slot = FIRST_SLOT
    while active:
        index, hop = active.popleft()
        flow = flows[index]
        schedule.append(
            ScheduledTransmission(
                slot=slot, transmitter=flow.route[hop], flow=flow, hop_index=hop
            )
        )
        slot += 1
        if hop + 1 < flow.hops:
            active.append((index, hop + 1))
    return schedule


def run_warmup(topo: Topology, flows: Sequence[Flow], seed: int) -> WarmupResult:
    """Forward every flow hop by hop, updating centrality at senders and listeners."""
    states = initial_states(topo)
    neighbors = [sorted(omni_neighbors(topo, v)) for v in range(topo.n_nodes)]
    events: list[SlotEvent] = []
    for step in build_schedule(flows, seed):
        sender = states[step.transmitter]
        w_after = wfb_on_transmit(sender, step.slot)
        for u in neighbors[step.transmitter]:
            wfb_on_overhear(
                states[u],
                step.transmitter,
                w_after,
                sender.g,
                step.slot,
                hop_count=step.hop_index + 1,
                transmitter_position=sender.position,
            )
        events.append(
            SlotEvent(
                slot=step.slot,
                transmitter=step.transmitter,
                flow_src=step.flow.source,
                flow_dst=step.flow.destination,
                hop_index=step.hop_index,
                w_after=w_after,
                g_after=sender.g,
            )
        )
    logger.debug("wfb.warmup_done", flows=len(flows), slots=len(events))
    return WarmupResult(states=states, events=events)
