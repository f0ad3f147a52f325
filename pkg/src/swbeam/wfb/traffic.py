"""Flow generation and minimum-hop routing on the all-omni graph."""

from __future__ import annotations

import math

import numpy as np

from ..errors import InvalidParameterError
from ..linkgraph import DirectedLinkGraph, omni_link_graph
from ..log import get_logger
from ..metrics import all_pairs_hop_distances
from ..seeds import Stream, derive_rng
from ..topology import Topology
from ..types import NodeId
from .state import Flow

logger = get_logger(__name__)


def source_count(n_nodes: int, source_fraction: float) -> int:
    """⌈fraction · N⌉, ignoring float noise just above an integer."""
    if not 0.0 < source_fraction <= 1.0:
        raise InvalidParameterError(
            f"source fraction must lie in (0, 1], got {source_fraction}"
        )
    return min(n_nodes, max(1, math.ceil(source_fraction * n_nodes - 1e-9)))


def min_hop_route(
    graph: DirectedLinkGraph,
    hops: np.ndarray,
    source: NodeId,
    destination: NodeId,
) -> tuple[NodeId, ...] | None:
    """Lexicographically smallest minimum-hop node sequence, or None if unreachable.

    ``hops`` holds all-pairs hop distances of ``graph``; at every step the walk
    takes the smallest-id neighbour one hop closer to the destination.
    """
    remaining = hops[source, destination]
    if not np.isfinite(remaining):
        return None
    route = [source]
    current = source
    while current != destination:
        remaining -= 1
        current = next(
            u for u in graph.out_adjacency[current] if hops[u, destination] == remaining
        )
        route.append(current)
    return tuple(route)


def generate_traffic(
    topo: Topology,
    source_fraction: float,
    seed: int,
    *,
    graph: DirectedLinkGraph | None = None,
) -> list[Flow]:
    """Pick distinct sources, each sending one packet to a random other node."""
    n = topo.n_nodes
    k = source_count(n, source_fraction)
    rng = derive_rng(seed, Stream.TRAFFIC)
    sources = rng.choice(n, size=k, replace=False)
    # one draw per source, shifted past the source itself
    offsets = rng.integers(0, n - 1, size=k)
    routing_graph = graph if graph is not None else omni_link_graph(topo)
    hops = all_pairs_hop_distances(routing_graph)
    flows: list[Flow] = []
    for source, offset in zip(sources.tolist(), offsets.tolist(), strict=True):
        destination = offset if offset < source else offset + 1
        route = min_hop_route(routing_graph, hops, source, destination)
        if route is None:
            logger.warning("wfb.flow_dropped", source=source, destination=destination)
            continue
        flows.append(Flow(source=source, destination=destination, route=route))
    logger.debug("wfb.traffic_generated", flows=len(flows), sources=k, seed=seed)
    return flows
