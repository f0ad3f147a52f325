"""Small-world statistics of directed link graphs."""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import asdict, dataclass, fields

import networkx as nx
import numpy as np
from scipy.sparse.csgraph import shortest_path
from scipy.stats import spearmanr

from .errors import EmptyGraphError, InvalidParameterError
from .linkgraph import DirectedLinkGraph
from .topology import Topology

REPORT_COLUMNS = (
    "seed",
    "n",
    "width",
    "height",
    "model",
    "p",
    "beta",
    "apl0",
    "apl",
    "c0",
    "c",
    "uni_frac",
    "unreach_frac",
    "beamformer_frac",
    "d",
)


@dataclass(frozen=True, slots=True)
class MetricsReport:
    """One row of results: a rewired network measured against its all-omni baseline.

    ``beta`` is NaN for studies without a decision threshold.
    """

    seed: int
    n: int
    width: float
    height: float
    model: str
    p: float
    beta: float
    apl0: float
    apl: float
    c0: float
    c: float
    uni_frac: float
    unreach_frac: float
    beamformer_frac: float
    d: float

    @property
    def apl_ratio(self) -> float:
        return self.apl / self.apl0

    @property
    def clustering_ratio(self) -> float:
        return self.c / self.c0 if self.c0 > 0 else math.nan

    def to_row(self) -> dict[str, object]:
        return asdict(self)

    @classmethod
    def from_row(cls, row: Mapping[str, object]) -> MetricsReport:
        values: dict[str, object] = {}
        for spec in fields(cls):
            raw = row[spec.name]
            if spec.name in ("seed", "n"):
                values[spec.name] = int(raw)  # type: ignore[arg-type]
            elif spec.name == "model":
                values[spec.name] = str(raw)
            else:
                values[spec.name] = float(raw)  # type: ignore[arg-type]
        return cls(**values)  # type: ignore[arg-type]


@dataclass(frozen=True, slots=True)
class GrowthFit:
    slope: float
    intercept: float
    r_squared: float


@dataclass(frozen=True, slots=True)
class BaselineStats:
    """Path length and clustering of the all-omni network."""

    apl: float
    clustering: float


def all_pairs_hop_distances(graph: DirectedLinkGraph) -> np.ndarray:
    """Breadth-first hop counts from every source; ``inf`` marks unreachable pairs."""
    if graph.n == 0:
        return np.zeros((0, 0))
    return shortest_path(graph.to_csr(), method="D", directed=True, unweighted=True)


def _reachability(hops: np.ndarray) -> np.ndarray:
    reach = np.isfinite(hops)
    np.fill_diagonal(reach, False)
    return reach


def average_path_length(graph: DirectedLinkGraph) -> float:
    """Mean hop distance over ordered reachable pairs."""
    return _apl_from_hops(all_pairs_hop_distances(graph))


def _apl_from_hops(hops: np.ndarray) -> float:
    reach = _reachability(hops)
    pairs = int(reach.sum())
    if pairs == 0:
        raise EmptyGraphError("no ordered pair of nodes is connected by a path")
    # rows summed in source order
    return float(np.where(reach, hops, 0.0).sum(axis=1).sum() / pairs)


def unreachable_pair_fraction(graph: DirectedLinkGraph) -> float:
    return _unreachable_from_hops(all_pairs_hop_distances(graph))


def _unreachable_from_hops(hops: np.ndarray) -> float:
    n = hops.shape[0]
    if n < 2:
        return 0.0
    return float((n * (n - 1) - _reachability(hops).sum()) / (n * (n - 1)))


def clustering_coefficient(graph: DirectedLinkGraph) -> float:
    """Mean out-neighbourhood transitivity; nodes with out-degree < 2 count as 0."""
    if graph.n == 0:
        return 0.0
    dense = graph.to_dense()
    total = 0.0
    for v, targets in enumerate(graph.out_adjacency):
        k = len(targets)
        if k < 2:
            continue
        idx = np.asarray(targets)
        linked = int(dense[np.ix_(idx, idx)].sum())
        total += linked / (k * (k - 1))
    return total / graph.n


def _unidirectional_matrix(hops: np.ndarray) -> np.ndarray:
    reach = _reachability(hops)
    return np.triu(reach ^ reach.T, k=1)


def unidirectional_pair_fraction(graph: DirectedLinkGraph) -> float:
    """Fraction of unordered pairs with a directed path one way but not the other."""
    return _uni_from_hops(all_pairs_hop_distances(graph))


def _uni_from_hops(hops: np.ndarray) -> float:
    n = hops.shape[0]
    if n < 2:
        raise InvalidParameterError("unidirectional fraction needs at least 2 nodes")
    return float(_unidirectional_matrix(hops).sum() / (n * (n - 1) / 2))


def unidirectional_node_fraction(graph: DirectedLinkGraph) -> float:
    """Fraction of nodes that take part in at least one unidirectional pair."""
    one_way = _unidirectional_matrix(all_pairs_hop_distances(graph))
    involved = one_way.any(axis=0) | one_way.any(axis=1)
    return float(involved.mean()) if graph.n else 0.0


def long_link_fraction(graph: DirectedLinkGraph, topo: Topology) -> float:
    """Share of directed edges longer than the omni range."""
    edges = graph.edges()
    if not edges:
        return 0.0
    src, dst = np.asarray(edges).T
    return float((topo.distances[src, dst] > topo.omni_range).mean())


def _least_squares(xs: np.ndarray, ys: np.ndarray) -> GrowthFit:
    slope, intercept = np.polyfit(xs, ys, deg=1)
    residual = float(((ys - (slope * xs + intercept)) ** 2).sum())
    spread = float(((ys - ys.mean()) ** 2).sum())
    # zero variance in y: the fit is exact but explains nothing
    r_squared = 0.0 if spread == 0.0 else 1.0 - residual / spread
    return GrowthFit(slope=float(slope), intercept=float(intercept), r_squared=r_squared)


def _fit_inputs(points: Sequence[tuple[float, float]]) -> tuple[np.ndarray, np.ndarray]:
    if len(points) < 3:
        raise InvalidParameterError(
            f"a growth fit needs at least 3 points, got {len(points)}"
        )
    xs = np.asarray([p[0] for p in points], dtype=np.float64)
    ys = np.asarray([p[1] for p in points], dtype=np.float64)
    if len(np.unique(xs)) != len(xs):
        raise InvalidParameterError("growth fit points need distinct diameters")
    if not (np.isfinite(xs).all() and np.isfinite(ys).all()):
        raise InvalidParameterError("growth fit points must be finite")
    return xs, ys


def log_growth_fit(points: Sequence[tuple[float, float]]) -> GrowthFit:
    """Least-squares fit of APL against ln D."""
    xs, ys = _fit_inputs(points)
    if (xs <= 0).any():
        raise InvalidParameterError("log growth fit needs positive diameters")
    return _least_squares(np.log(xs), ys)


def linear_growth_fit(points: Sequence[tuple[float, float]]) -> GrowthFit:
    """Least-squares fit of APL against D."""
    xs, ys = _fit_inputs(points)
    return _least_squares(xs, ys)


def baseline_stats(graph: DirectedLinkGraph) -> BaselineStats:
    return BaselineStats(
        apl=average_path_length(graph), clustering=clustering_coefficient(graph)
    )


def compute_report(
    graph: DirectedLinkGraph,
    baseline: BaselineStats,
    topo: Topology,
    *,
    seed: int,
    model: str,
    p: float,
    beta: float = math.nan,
    beamformer_frac: float | None = None,
    diameter: float | None = None,
) -> MetricsReport:
    hops = all_pairs_hop_distances(graph)
    return MetricsReport(
        seed=seed,
        n=topo.n_nodes,
        width=topo.width,
        height=topo.height,
        model=model,
        p=p,
        beta=beta,
        apl0=baseline.apl,
        apl=_apl_from_hops(hops),
        c0=baseline.clustering,
        c=clustering_coefficient(graph),
        uni_frac=_uni_from_hops(hops),
        unreach_frac=_unreachable_from_hops(hops),
        beamformer_frac=p if beamformer_frac is None else beamformer_frac,
        d=float(topo.distances.max()) if diameter is None else diameter,
    )


def wfb_rank_correlation(values: Sequence[float], graph: DirectedLinkGraph) -> float:
    """Spearman correlation between per-node centrality estimates and exact
    shortest-path betweenness. Meant for small networks."""
    if len(values) != graph.n:
        raise InvalidParameterError(
            f"got {len(values)} centrality values for {graph.n} nodes"
        )
    digraph = nx.DiGraph()
    digraph.add_nodes_from(range(graph.n))
    digraph.add_edges_from(graph.edges())
    exact = nx.betweenness_centrality(digraph, normalized=True)
    rho = spearmanr(list(values), [exact[v] for v in range(graph.n)]).statistic
    return float(rho)
