"""Directed communication graph under directional transmission and
omnidirectional reception (DTOR).

Only a node's own antenna shapes its out-links; every node receives
omnidirectionally, so changing one node's config never touches another
node's out-adjacency.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd
from scipy.sparse import csr_array

from .antenna import AntennaConfig, Omni, Sector, Ula, config_reach, sector_mask
from .errors import InvalidParameterError, TopologyFormatError
from .topology import Topology
from .types import TWO_PI, NodeId

EDGE_COLUMNS = ("src", "dst")


@dataclass(frozen=True, slots=True)
class DirectedLinkGraph:
    """Sorted out-adjacency lists plus their derived mirror."""

    n: int
    out_adjacency: tuple[tuple[NodeId, ...], ...]
    in_adjacency: tuple[tuple[NodeId, ...], ...] = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.out_adjacency) != self.n:
            raise InvalidParameterError(
                f"expected {self.n} adjacency lists, got {len(self.out_adjacency)}"
            )
        incoming: list[list[NodeId]] = [[] for _ in range(self.n)]
        for v, targets in enumerate(self.out_adjacency):
            for u in targets:
                if not 0 <= u < self.n:
                    raise InvalidParameterError(f"edge {v}->{u} leaves the node range")
                if u == v:
                    raise InvalidParameterError(f"self loop at node {v}")
                incoming[u].append(v)
        object.__setattr__(
            self, "in_adjacency", tuple(tuple(sources) for sources in incoming)
        )

    @classmethod
    def from_edges(cls, n: int, edges: Sequence[tuple[NodeId, NodeId]]) -> DirectedLinkGraph:
        targets: list[set[NodeId]] = [set() for _ in range(n)]
        for src, dst in edges:
            if not 0 <= src < n:
                raise InvalidParameterError(f"edge {src}->{dst} leaves the node range")
            targets[src].add(dst)
        return cls(n=n, out_adjacency=tuple(tuple(sorted(t)) for t in targets))

    @property
    def edge_count(self) -> int:
        return sum(len(targets) for targets in self.out_adjacency)

    def edges(self) -> list[tuple[NodeId, NodeId]]:
        return [(v, u) for v, targets in enumerate(self.out_adjacency) for u in targets]

    def has_edge(self, src: NodeId, dst: NodeId) -> bool:
        targets = self.out_adjacency[src]
        index = int(np.searchsorted(targets, dst)) if targets else 0
        return index < len(targets) and targets[index] == dst

    def to_csr(self) -> csr_array:
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(targets) for targets in self.out_adjacency])
        indices = np.fromiter(
            (u for targets in self.out_adjacency for u in targets),
            dtype=np.int64,
            count=int(indptr[-1]),
        )
        data = np.ones(len(indices), dtype=np.float64)
        return csr_array((data, indices, indptr), shape=(self.n, self.n))

    def to_dense(self) -> np.ndarray:
        matrix = np.zeros((self.n, self.n), dtype=bool)
        for v, targets in enumerate(self.out_adjacency):
            matrix[v, list(targets)] = True
        return matrix


def _bearings_from(topo: Topology, v: NodeId) -> np.ndarray:
    delta = topo.coords - topo.coords[v]
    return np.mod(np.arctan2(delta[:, 1], delta[:, 0]), TWO_PI)


def transmit_mask(topo: Topology, v: NodeId, config: AntennaConfig) -> np.ndarray:
    """Boolean mask of the nodes reached by ``v`` transmitting with ``config``.

    ``v`` itself is excluded. Omni and ULA reach use the topology's distance matrix.
    """
    dist = topo.distances[v]
    match config:
        case Omni(range=omni_range):
            mask = dist <= omni_range
        case Sector(width=width, length=length, orientation=orientation):
            delta = topo.coords - topo.coords[v]
            mask = sector_mask(delta[:, 0], delta[:, 1], orientation, width, length)
        case Ula():
            reach = config_reach(config, _bearings_from(topo, v), topo.omni_range)
            mask = dist <= reach
        case _:
            raise TypeError(f"unknown antenna config {config!r}")
    mask = np.array(mask, dtype=bool)
    mask[v] = False
    return mask


def build_link_graph(
    topo: Topology, configs: Sequence[AntennaConfig]
) -> DirectedLinkGraph:
    if len(configs) != topo.n_nodes:
        raise InvalidParameterError(
            f"got {len(configs)} antenna configs for {topo.n_nodes} nodes"
        )
    out_adjacency = tuple(
        tuple(int(u) for u in np.flatnonzero(transmit_mask(topo, v, config)))
        for v, config in enumerate(configs)
    )
    return DirectedLinkGraph(n=topo.n_nodes, out_adjacency=out_adjacency)


def omni_configs(topo: Topology) -> list[AntennaConfig]:
    return [Omni(topo.omni_range)] * topo.n_nodes


def omni_link_graph(topo: Topology) -> DirectedLinkGraph:
    return build_link_graph(topo, omni_configs(topo))


def is_symmetric(graph: DirectedLinkGraph) -> bool:
    """True iff every edge has its reverse."""
    return all(
        graph.has_edge(u, v)
        for v, targets in enumerate(graph.out_adjacency)
        for u in targets
    )


def export_edges(graph: DirectedLinkGraph, path: Path) -> None:
    frame = pd.DataFrame(graph.edges(), columns=list(EDGE_COLUMNS), dtype=np.int64)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator="\n")


def load_edges(path: Path, n: int) -> DirectedLinkGraph:
    try:
        frame = pd.read_csv(path, dtype=np.int64)
    except (OSError, ValueError, pd.errors.ParserError) as exc:
        raise TopologyFormatError(f"cannot read edge list {path}: {exc}") from exc
    if tuple(frame.columns) != EDGE_COLUMNS:
        raise TopologyFormatError(
            f"{path}: expected header {','.join(EDGE_COLUMNS)}, "
            f"got {','.join(map(str, frame.columns))}"
        )
    edges = list(zip(frame["src"].tolist(), frame["dst"].tolist(), strict=True))
    try:
        return DirectedLinkGraph.from_edges(n, edges)
    except InvalidParameterError as exc:
        raise TopologyFormatError(f"{path}: {exc}") from exc
