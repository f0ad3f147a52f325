"""Tests for directed link graph construction and edge-list files."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import pytest

from swbeam.antenna import (
    AntennaConfig,
    Omni,
    Sector,
    Ula,
    sector_beam_length,
    transmit_covers,
)
from swbeam.errors import InvalidParameterError, TopologyFormatError
from swbeam.linkgraph import (
    DirectedLinkGraph,
    build_link_graph,
    export_edges,
    is_symmetric,
    load_edges,
    omni_configs,
    omni_link_graph,
    transmit_mask,
)
from swbeam.topology import Topology, generate_topology, omni_neighbors
from swbeam.types import TWO_PI

from swbeam_fixtures import make_topology


class TestDirectedLinkGraph:
    def test_from_edges_sorts_and_dedups(self) -> None:
        graph = DirectedLinkGraph.from_edges(3, [(0, 2), (0, 1), (0, 2), (2, 1)])
        assert graph.out_adjacency == ((1, 2), (), (1,))
        assert graph.in_adjacency == ((), (0, 2), (0,))
        assert graph.edge_count == 3
        assert graph.edges() == [(0, 1), (0, 2), (2, 1)]

    def test_has_edge(self) -> None:
        graph = DirectedLinkGraph.from_edges(3, [(0, 1)])
        assert graph.has_edge(0, 1)
        assert not graph.has_edge(1, 0)
        assert not graph.has_edge(2, 0)

    def test_rejects_self_loop(self) -> None:
        with pytest.raises(InvalidParameterError, match="self loop"):
            DirectedLinkGraph.from_edges(2, [(1, 1)])

    def test_rejects_out_of_range(self) -> None:
        with pytest.raises(InvalidParameterError):
            DirectedLinkGraph.from_edges(2, [(0, 5)])

    def test_dense_and_sparse_agree(self) -> None:
        graph = DirectedLinkGraph.from_edges(4, [(0, 1), (1, 2), (3, 0)])
        assert (graph.to_csr().toarray() > 0).tolist() == graph.to_dense().tolist()


class TestBuildLinkGraph:
    def test_omni_graph_matches_disc_graph(self) -> None:
        topo = generate_topology(60, 4.0, 4.0, seed=9)
        graph = omni_link_graph(topo)
        assert is_symmetric(graph)
        for v in range(topo.n_nodes):
            assert set(graph.out_adjacency[v]) == omni_neighbors(topo, v)

    def test_single_element_arrays_reproduce_omni(self) -> None:
        topo = generate_topology(80, 5.0, 5.0, seed=10)
        arrays = [Ula(elements=1, boresight=0.1 * v) for v in range(topo.n_nodes)]
        assert build_link_graph(topo, arrays) == omni_link_graph(topo)

    def test_sector_beam_creates_one_way_link(self) -> None:
        topo = make_topology([(0.0, 0.0), (2.0, 0.0), (0.0, 2.0)], width=3.0)
        configs = omni_configs(topo)
        configs[0] = Sector(width=math.pi / 2, length=2.5, orientation=0.0)
        graph = build_link_graph(topo, configs)
        assert graph.edges() == [(0, 1)]
        assert not is_symmetric(graph)

    def test_beamformer_loses_omni_neighbours_outside_beam(self) -> None:
        topo = make_topology([(1.0, 1.0), (1.5, 1.0), (0.5, 1.0)], width=3.0)
        configs = omni_configs(topo)
        configs[0] = Sector(width=math.pi / 4, length=2.0, orientation=0.0)
        graph = build_link_graph(topo, configs)
        assert graph.out_adjacency[0] == (1,)
        assert graph.has_edge(2, 0)

    def test_mask_excludes_self(self) -> None:
        topo = make_topology([(0.0, 0.0), (0.5, 0.0)], width=1.0)
        assert transmit_mask(topo, 0, Omni(1.0)).tolist() == [False, True]

    def test_length_mismatch(self) -> None:
        topo = make_topology([(0.0, 0.0), (0.5, 0.0)], width=1.0)
        with pytest.raises(InvalidParameterError):
            build_link_graph(topo, [Omni(1.0)])


class TestEdgeFiles:
    def test_round_trip(self, tmp_path: Path) -> None:
        topo = generate_topology(30, 3.0, 3.0, seed=1)
        configs = omni_configs(topo)
        configs[4] = Sector(width=0.5, length=3.0, orientation=1.0)
        graph = build_link_graph(topo, configs)
        first = tmp_path / "edges.csv"
        second = tmp_path / "again.csv"
        export_edges(graph, first)
        loaded = load_edges(first, topo.n_nodes)
        export_edges(loaded, second)

        assert loaded == graph
        assert first.read_bytes() == second.read_bytes()
        assert first.read_text().splitlines()[0] == "src,dst"

    def test_bad_header(self, tmp_path: Path) -> None:
        path = tmp_path / "edges.csv"
        path.write_text("from,to\n0,1\n")
        with pytest.raises(TopologyFormatError, match="header"):
            load_edges(path, 2)

    def test_node_out_of_range(self, tmp_path: Path) -> None:
        path = tmp_path / "edges.csv"
        path.write_text("src,dst\n0,7\n")
        with pytest.raises(TopologyFormatError):
            load_edges(path, 2)


def _random_sectors(rng: np.random.Generator, topo: Topology, p: float) -> list[AntennaConfig]:
    configs = omni_configs(topo)
    for v in np.flatnonzero(rng.random(topo.n_nodes) < p):
        theta = float(rng.uniform(0.1, TWO_PI))
        configs[int(v)] = Sector(
            width=theta,
            length=sector_beam_length(theta, topo.omni_range),
            orientation=float(rng.uniform(0.0, TWO_PI)),
        )
    return configs


class TestDirectionalTransmission:
    def test_changing_one_node_leaves_others_alone(self) -> None:
        rng = np.random.default_rng(21)
        topo = generate_topology(60, 4.0, 4.0, seed=21)
        configs = _random_sectors(rng, topo, 0.3)
        before = build_link_graph(topo, configs)
        for v in (0, 17, 59):
            changed = list(configs)
            changed[v] = Sector(width=0.4, length=3.0, orientation=float(v))
            after = build_link_graph(topo, changed)
            for u in range(topo.n_nodes):
                if u != v:
                    assert after.out_adjacency[u] == before.out_adjacency[u]

    def test_sector_links_stay_inside_beam_disc(self) -> None:
        rng = np.random.default_rng(22)
        topo = generate_topology(80, 5.0, 5.0, seed=22)
        configs = _random_sectors(rng, topo, 0.5)
        graph = build_link_graph(topo, configs)
        for v, config in enumerate(configs):
            if not isinstance(config, Sector):
                continue
            reach = topo.distances[v] <= config.length
            disc = {int(u) for u in np.flatnonzero(reach) if u != v}
            assert set(graph.out_adjacency[v]) <= disc
            assert len(graph.out_adjacency[v]) <= len(disc)

    def test_mask_agrees_with_pointwise_test(self) -> None:
        rng = np.random.default_rng(23)
        topo = generate_topology(70, 4.0, 4.0, seed=23)
        for config in _random_sectors(rng, topo, 1.0)[:10]:
            for v in range(topo.n_nodes):
                mask = transmit_mask(topo, v, config)
                expected = [
                    u != v
                    and transmit_covers(config, topo.positions[v], topo.positions[u], 1.0)
                    for u in range(topo.n_nodes)
                ]
                assert mask.tolist() == expected

    def test_mask_agrees_on_sector_edges(self) -> None:
        origin = (5.0, 5.0)
        beam = Sector(width=math.pi / 3, length=2.0, orientation=0.7)
        points = [origin]
        for angle in (beam.orientation - beam.width / 2, beam.orientation + beam.width / 2):
            for radius in (0.5, 1.0, beam.length, beam.length * (1 + 1e-12)):
                points.append(
                    (origin[0] + radius * math.cos(angle), origin[1] + radius * math.sin(angle))
                )
        for radius in (beam.length, beam.length * (1 - 1e-12), beam.length * (1 + 1e-12)):
            points.append(
                (
                    origin[0] + radius * math.cos(beam.orientation),
                    origin[1] + radius * math.sin(beam.orientation),
                )
            )
        topo = make_topology(points, width=10.0)
        mask = transmit_mask(topo, 0, beam)
        for u in range(1, topo.n_nodes):
            assert bool(mask[u]) == transmit_covers(
                beam, topo.positions[0], topo.positions[u], 1.0
            )
        assert not mask[0]


class TestSymmetry:
    def test_empty_graph_is_symmetric(self) -> None:
        assert is_symmetric(DirectedLinkGraph.from_edges(3, []))
        assert is_symmetric(DirectedLinkGraph.from_edges(0, []))

    def test_one_way_edge_breaks_symmetry(self) -> None:
        assert is_symmetric(DirectedLinkGraph.from_edges(2, [(0, 1), (1, 0)]))
        assert not is_symmetric(DirectedLinkGraph.from_edges(2, [(0, 1)]))
