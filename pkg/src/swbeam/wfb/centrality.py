"""Wireless flow betweenness (WFB) updates.

A node's centrality is recomputed whenever it transmits and whenever it
overhears a neighbour. Only neighbours that have been overheard at least once
take part in the sums; a node cannot know about the others.

Sums use ``math.fsum`` so a value depends only on the set of terms, never on
the order the neighbour table was filled in.
"""

from __future__ import annotations

import math

from ..types import NodeId, Point
from .state import NeighborRecord, WfbNodeState


def simple_betweenness(state: WfbNodeState) -> float:
    """Share of the neighbourhood's forwarded packets that this node forwarded."""
    total = math.fsum([state.g, *(rec.g for rec in state.neighbor_table.values())])
    return state.g / total


def _neighbor_load(state: WfbNodeState, *, exclude: NodeId | None = None) -> list[float]:
    return [
        rec.g / rec.w
        for node, rec in state.neighbor_table.items()
        if node != exclude
    ]


def wfb_on_transmit(state: WfbNodeState, slot: int) -> float:
    """Update a transmitter's centrality; the transmitted packet counts as forwarded.

    w(t) = g(t) / (w(t-1) · Σ g(t-1)/w(t-1)) over the node and its heard neighbours.
    """
    previous_w = state.w
    load = math.fsum([state.g / previous_w, *_neighbor_load(state)])
    state.g += 1
    state.w = state.g / (previous_w * load)
    return state.w


def wfb_on_overhear(
    state: WfbNodeState,
    transmitter: NodeId,
    w_transmitter: float,
    g_transmitter: int,
    slot: int,
    *,
    hop_count: int,
    transmitter_position: Point,
) -> float:
    """Update a listener's centrality from the values attached to an overheard packet.

    The transmitter contributes its fresh values; every other term uses what
    the listener knew before this slot. The listener's own count is unchanged.
    """
    previous_w = state.w
    load = math.fsum(
        [
            g_transmitter / w_transmitter,
            state.g / previous_w,
            *_neighbor_load(state, exclude=transmitter),
        ]
    )
    state.w = state.g / (previous_w * load)
    record = state.neighbor_table.get(transmitter)
    if record is None:
        state.neighbor_table[transmitter] = NeighborRecord(
            w=w_transmitter,
            g=g_transmitter,
            position=transmitter_position,
            max_hop_count=hop_count,
            last_seen_slot=slot,
        )
    else:
        record.w = w_transmitter
        record.g = g_transmitter
        record.position = transmitter_position
        record.max_hop_count = max(record.max_hop_count, hop_count)
        record.last_seen_slot = slot
    return state.w
