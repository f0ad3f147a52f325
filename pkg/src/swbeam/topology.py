"""Random geometric node placements and Euclidean neighbourhood queries."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd
from scipy.sparse import csr_array
from scipy.sparse.csgraph import connected_components
from scipy.spatial.distance import pdist, squareform

from .errors import (
    DisconnectedTopologyError,
    InvalidParameterError,
    TopologyFormatError,
)
from .log import get_logger
from .seeds import Stream, derive_rng
from .types import NodeId, Point

logger = get_logger(__name__)

TOPOLOGY_COLUMNS = ("node_id", "x", "y")
META_SUFFIX = ".meta"
COORD_FORMAT = "%.17g"


@dataclass(frozen=True, slots=True)
class Topology:
    """Node positions in a ``width`` x ``height`` rectangle.

    Node ids are the dense indices ``0..N-1`` into ``positions``.
    ``distances`` is the full Euclidean distance matrix, computed once.
    """

    positions: tuple[Point, ...]
    width: float
    height: float
    omni_range: float = 1.0
    seed: int | None = None
    coords: np.ndarray = field(init=False, repr=False, compare=False)
    distances: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.positions) < 2:
            raise InvalidParameterError(
                f"a topology needs at least 2 nodes, got {len(self.positions)}"
            )
        _check_region(self.width, self.height)
        if not self.omni_range > 0:
            raise InvalidParameterError(
                f"omni range must be positive, got {self.omni_range}"
            )
        coords = np.asarray(self.positions, dtype=np.float64).reshape(-1, 2)
        if not np.isfinite(coords).all():
            first = int(np.flatnonzero(~np.isfinite(coords).all(axis=1))[0])
            raise InvalidParameterError(
                f"node {first} has a non-finite position {self.positions[first]}"
            )
        outside = (
            (coords[:, 0] < 0.0)
            | (coords[:, 0] > self.width)
            | (coords[:, 1] < 0.0)
            | (coords[:, 1] > self.height)
        )
        if outside.any():
            first = int(np.flatnonzero(outside)[0])
            raise InvalidParameterError(
                f"node {first} at {self.positions[first]} lies outside the "
                f"{self.width} x {self.height} region"
            )
        coords.setflags(write=False)
        distances = squareform(pdist(coords))
        distances.setflags(write=False)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "distances", distances)

    @property
    def n_nodes(self) -> int:
        return len(self.positions)

    def position(self, v: NodeId) -> Point:
        _check_node(self, v)
        return self.positions[v]


def _check_region(width: float, height: float) -> None:
    if not (width > 0 and height > 0) or math.isinf(width) or math.isinf(height):
        raise InvalidParameterError(
            f"region dimensions must be positive and finite, got {width} x {height}"
        )


def _check_node(topo: Topology, v: NodeId) -> None:
    if not 0 <= v < topo.n_nodes:
        raise InvalidParameterError(
            f"node id {v} out of range for {topo.n_nodes} nodes"
        )


def generate_topology(
    n_nodes: int,
    width: float,
    height: float,
    seed: int,
    *,
    omni_range: float = 1.0,
) -> Topology:
    """Place ``n_nodes`` nodes i.i.d. uniformly over the rectangle."""
    if n_nodes < 2:
        raise InvalidParameterError(f"n_nodes must be at least 2, got {n_nodes}")
    _check_region(width, height)
    rng = derive_rng(seed, Stream.TOPOLOGY)
    coords = rng.random((n_nodes, 2)) * np.array([width, height])
    positions = tuple((float(x), float(y)) for x, y in coords)
    return Topology(
        positions=positions,
        width=float(width),
        height=float(height),
        omni_range=float(omni_range),
        seed=seed,
    )


def omni_adjacency(topo: Topology) -> np.ndarray:
    """Boolean matrix of the omni disc graph (closed ball, no self loops)."""
    adjacency = topo.distances <= topo.omni_range
    np.fill_diagonal(adjacency, False)
    return adjacency


def omni_neighbors(topo: Topology, v: NodeId) -> frozenset[NodeId]:
    _check_node(topo, v)
    row = topo.distances[v] <= topo.omni_range
    return frozenset(int(u) for u in np.flatnonzero(row) if u != v)


def omni_degrees(topo: Topology) -> np.ndarray:
    return omni_adjacency(topo).sum(axis=1)


def mean_omni_degree(topo: Topology) -> float:
    return float(omni_degrees(topo).mean())


def euclidean_diameter(topo: Topology) -> float:
    """Largest distance between any two nodes (D)."""
    return float(topo.distances.max())


def is_connected(topo: Topology) -> bool:
    n_components, _ = connected_components(
        csr_array(omni_adjacency(topo)), directed=False
    )
    return n_components == 1


def generate_connected_topology(
    n_nodes: int,
    width: float,
    height: float,
    seed: int,
    *,
    omni_range: float = 1.0,
    max_resamples: int = 100,
) -> Topology:
    """Draw placements with ``seed``, ``seed + 1``, ... until the omni graph is connected."""
    for attempt in range(max_resamples + 1):
        topo = generate_topology(
            n_nodes, width, height, seed + attempt, omni_range=omni_range
        )
        if is_connected(topo):
            return topo
        logger.info(
            "topology.resampled",
            seed=seed + attempt,
            next_seed=seed + attempt + 1,
            n_nodes=n_nodes,
            width=width,
            height=height,
        )
    raise DisconnectedTopologyError(
        f"no connected placement of {n_nodes} nodes in {width} x {height} "
        f"after {max_resamples} resamples from seed {seed}"
    )


def meta_path(path: Path) -> Path:
    """Sidecar path holding the region, range and seed of a topology file."""
    return path.with_suffix(META_SUFFIX)


def save_topology(topo: Topology, path: Path) -> None:
    frame = pd.DataFrame(
        {
            "node_id": np.arange(topo.n_nodes, dtype=np.int64),
            "x": topo.coords[:, 0],
            "y": topo.coords[:, 1],
        }
    )
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=COORD_FORMAT, lineterminator="\n")
    seed = "" if topo.seed is None else str(topo.seed)
    meta_path(path).write_text(
        f"width={topo.width!r}\n"
        f"height={topo.height!r}\n"
        f"r={topo.omni_range!r}\n"
        f"seed={seed}\n"
    )


def _read_meta(path: Path) -> dict[str, str]:
    sidecar = meta_path(path)
    try:
        text = sidecar.read_text()
    except FileNotFoundError:
        raise TopologyFormatError(f"missing metadata sidecar {sidecar}") from None
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise TopologyFormatError(f"{sidecar}:{lineno}: expected key=value")
        values[key.strip()] = value.strip()
    missing = {"width", "height", "r", "seed"} - values.keys()
    if missing:
        raise TopologyFormatError(
            f"{sidecar}: missing keys {', '.join(sorted(missing))}"
        )
    return values


def load_topology(path: Path) -> Topology:
    meta = _read_meta(path)
    try:
        frame = pd.read_csv(path, float_precision="round_trip")
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise TopologyFormatError(f"cannot read topology {path}: {exc}") from exc
    if tuple(frame.columns) != TOPOLOGY_COLUMNS:
        raise TopologyFormatError(
            f"{path}: expected header {','.join(TOPOLOGY_COLUMNS)}, "
            f"got {','.join(map(str, frame.columns))}"
        )
    ids = frame["node_id"].to_numpy()
    if not np.array_equal(ids, np.arange(len(frame))):
        raise TopologyFormatError(f"{path}: node ids must be 0..N-1 in order")
    try:
        return Topology(
            positions=tuple(
                (float(x), float(y))
                for x, y in zip(frame["x"], frame["y"], strict=True)
            ),
            width=float(meta["width"]),
            height=float(meta["height"]),
            omni_range=float(meta["r"]),
            seed=int(meta["seed"]) if meta["seed"] else None,
        )
    except ValueError as exc:
        raise TopologyFormatError(f"{path}: {exc}") from exc
