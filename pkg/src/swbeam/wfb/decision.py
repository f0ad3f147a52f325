"""Beamforming decisions driven by WFB values.

Nodes take turns in descending WFB order. A node beamforms when its value is
close to its neighbourhood average and nobody has suppressed it yet; its
announcement then suppresses every node in its omni disc and in the new beam.
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from ..antenna import (
    DEFAULT_PATH_LOSS_EXPONENT,
    AntennaConfig,
    Sector,
    UlaReachMode,
    make_ula,
    optimal_beamwidth,
    sector_beam_length,
)
from ..errors import InvalidParameterError
from ..linkgraph import omni_configs, transmit_mask
from ..log import get_logger
from ..topology import Topology, omni_degrees
from ..types import AntennaModel, NodeId, bearing, distance
from .state import DecisionRecord, WfbNodeState

logger = get_logger(__name__)


@dataclass(frozen=True, slots=True)
class DecisionOutcome:
    configs: list[AntennaConfig]
    decisions: list[DecisionRecord]

    @property
    def beamformers(self) -> list[NodeId]:
        return [record.node for record in self.decisions if record.decision]


def neighborhood_average(state: WfbNodeState) -> float | None:
    """Mean of the last overheard WFB values, or None if nothing was heard."""
    if not state.neighbor_table:
        return None
    return math.fsum(rec.w for rec in state.neighbor_table.values()) / len(
        state.neighbor_table
    )


def within_similarity(w: float, w_avg: float, beta: float) -> bool:
    return abs(w_avg - w) < beta * w


def beam_decision(state: WfbNodeState, beta: float) -> bool:
    """Whether an unsuppressed node's WFB is within ``beta`` of its neighbourhood's."""
    if beta < 0:
        raise InvalidParameterError(f"beta must be non-negative, got {beta}")
    if state.suppressed:
        return False
    w_avg = neighborhood_average(state)
    if w_avg is None:
        return False
    return within_similarity(state.w, w_avg, beta)


def choose_orientation(state: WfbNodeState) -> float:
    """Bearing towards the neighbour that delivered the longest-travelled packet.

    Ties go to the most recently heard neighbour, then the lowest id. Without
    hop records the beam points at the farthest known neighbour.
    """
    table = state.neighbor_table
    if not table:
        raise InvalidParameterError(f"node {state.node} has no overheard neighbours")
    with_hops = [node for node, rec in table.items() if rec.max_hop_count > 0]
    if with_hops:
        target = min(
            with_hops,
            key=lambda node: (-table[node].max_hop_count, -table[node].last_seen_slot, node),
        )
    else:
        target = min(
            table,
            key=lambda node: (-distance(state.position, table[node].position), node),
        )
    return bearing(state.position, table[target].position)


def per_node_theta(topo: Topology, candidates: Sequence[float]) -> list[float]:
    """Optimal beam width per node, using its own omni degree as density."""
    by_degree: dict[int, float] = {}
    thetas: list[float] = []
    for degree in omni_degrees(topo).tolist():
        if degree not in by_degree:
            by_degree[degree] = optimal_beamwidth(candidates, topo.omni_range, degree)
        thetas.append(by_degree[degree])
    return thetas


def beamformed_config(
    model: AntennaModel,
    theta: float,
    orientation: float,
    r: float,
    *,
    alpha: float = DEFAULT_PATH_LOSS_EXPONENT,
    ula_mode: UlaReachMode = "calibrated",
) -> AntennaConfig:
    length = sector_beam_length(theta, r)
    if model == "ula":
        return make_ula(length, r, orientation, alpha=alpha, mode=ula_mode)
    return Sector(width=theta, length=length, orientation=orientation)


def footprint(topo: Topology, v: NodeId, config: AntennaConfig) -> np.ndarray:
    """Nodes hearing either of ``v``'s announcements: omni disc or new beam."""
    omni = topo.distances[v] <= topo.omni_range
    mask = omni | transmit_mask(topo, v, config)
    mask[v] = False
    return mask


def apply_decisions(
    topo: Topology,
    states: Mapping[NodeId, WfbNodeState],
    beta: float,
    thetas: Sequence[float],
    *,
    model: AntennaModel = "sector",
    alpha: float = DEFAULT_PATH_LOSS_EXPONENT,
    ula_mode: UlaReachMode = "calibrated",
) -> DecisionOutcome:
    if len(thetas) != topo.n_nodes:
        raise InvalidParameterError(
            f"got {len(thetas)} beam widths for {topo.n_nodes} nodes"
        )
    configs = omni_configs(topo)
    suppressed_by: dict[NodeId, NodeId] = {}
    decisions: list[DecisionRecord] = []
    order = sorted(states, key=lambda v: (-states[v].w, v))
    for position, v in enumerate(order):
        state = states[v]
        suppressor = suppressed_by.get(v)
        if suppressor is None and beam_decision(state, beta):
            orientation = choose_orientation(state)
            config = beamformed_config(
                model, thetas[v], orientation, topo.omni_range, alpha=alpha, ula_mode=ula_mode
            )
            configs[v] = config
            state.beamformed = True
            for u in np.flatnonzero(footprint(topo, v, config)).tolist():
                if u not in suppressed_by and not states[u].beamformed:
                    suppressed_by[u] = v
                    states[u].suppressed = True
            decisions.append(
                DecisionRecord(
                    order=position,
                    node=v,
                    w=state.w,
                    decision=True,
                    suppressor=None,
                    orientation=orientation,
                    theta=thetas[v],
                )
            )
            continue
        decisions.append(
            DecisionRecord(
                order=position,
                node=v,
                w=state.w,
                decision=False,
                suppressor=suppressor,
                orientation=math.nan,
                theta=math.nan,
            )
        )
    logger.debug(
        "wfb.decisions_applied",
        beamformers=sum(record.decision for record in decisions),
        suppressed=len(suppressed_by),
        beta=beta,
    )
    return DecisionOutcome(configs=configs, decisions=decisions)


def check_suppression(
    decisions: Sequence[DecisionRecord],
    topo: Topology,
    configs: Sequence[AntennaConfig],
) -> list[tuple[NodeId, NodeId]]:
    """(earlier, later) beamformer pairs where the later one sits in the
    earlier one's footprint. Empty when the decision log is sound."""
    beamformers = [record.node for record in sorted(decisions, key=lambda r: r.order) if record.decision]
    violations: list[tuple[NodeId, NodeId]] = []
    for i, earlier in enumerate(beamformers):
        covered = footprint(topo, earlier, configs[earlier])
        violations.extend(
            (earlier, later) for later in beamformers[i + 1 :] if covered[later]
        )
    return violations
