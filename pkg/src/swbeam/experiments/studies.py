"""Single-replicate work units of the three studies.

Each function is pure given its arguments: it draws every random number from
streams keyed by (base seed, region, replicate), so the runner may execute
units in any order and on any thread.
"""

from __future__ import annotations

import copy
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from ..antenna import AntennaConfig, UlaReachMode, optimal_beamwidth, sector_beam_length
from ..errors import InvariantError
from ..linkgraph import DirectedLinkGraph, build_link_graph, omni_configs, omni_link_graph
from ..log import get_logger
from ..metrics import MetricsReport, baseline_stats, compute_report
from ..seeds import Stream, derive_rng, unit_seed
from ..topology import (
    Topology,
    euclidean_diameter,
    generate_connected_topology,
    mean_omni_degree,
)
from ..types import TWO_PI, AntennaModel
from ..wfb import (
    DecisionOutcome,
    DecisionRecord,
    WarmupResult,
    apply_decisions,
    beamformed_config,
    check_suppression,
    generate_traffic,
    per_node_theta,
    run_warmup,
)
from .config import ExperimentConfig

logger = get_logger(__name__)


@dataclass(frozen=True, slots=True)
class ReplicateResult:
    region_index: int
    replicate: int
    reports: list[MetricsReport]
    decisions: dict[float, list[DecisionRecord]] = field(default_factory=dict)


def replicate_topology(cfg: ExperimentConfig, region_index: int, replicate: int) -> Topology:
    width, height = cfg.regions()[region_index]
    return generate_connected_topology(
        cfg.node_count(width, height),
        width,
        height,
        unit_seed(cfg.base_seed, Stream.TOPOLOGY, region_index, replicate),
        omni_range=cfg.omni_range,
        max_resamples=cfg.max_resamples,
    )


def beamformer_count(n_nodes: int, p: float) -> int:
    return min(n_nodes, math.ceil(p * n_nodes - 1e-9))


def random_beam_configs(
    topo: Topology,
    p: float,
    rng: np.random.Generator,
    make_beam: Callable[[float], AntennaConfig],
) -> tuple[list[AntennaConfig], int]:
    """Give ⌈pN⌉ uniformly chosen nodes ``make_beam(orientation)`` with a
    uniformly drawn orientation; everyone else stays omni."""
    configs = omni_configs(topo)
    k = beamformer_count(topo.n_nodes, p)
    if k == 0:
        return configs, 0
    chosen = rng.choice(topo.n_nodes, size=k, replace=False)
    orientations = rng.uniform(0.0, TWO_PI, size=k)
    for v, orientation in zip(chosen.tolist(), orientations.tolist(), strict=True):
        configs[v] = make_beam(orientation)
    return configs, k


def _beam_at(
    orientation: float, *, cfg: ExperimentConfig, theta: float, r: float
) -> AntennaConfig:
    return beamformed_config(
        cfg.model, theta, orientation, r, alpha=cfg.alpha, ula_mode=cfg.ula_reach_mode
    )


def rand_p_replicate(
    cfg: ExperimentConfig,
    region_index: int,
    replicate: int,
    p_values: list[float],
) -> ReplicateResult:
    """One topology measured at every p, sharing the same all-omni baseline."""
    topo = replicate_topology(cfg, region_index, replicate)
    baseline = baseline_stats(omni_link_graph(topo))
    diameter = euclidean_diameter(topo)
    theta = optimal_beamwidth(cfg.theta_grid, topo.omni_range, mean_omni_degree(topo))
    make_beam = partial(
        _beam_at,
        cfg=cfg,
        theta=theta,
        r=topo.omni_range,
    )
    reports: list[MetricsReport] = []
    for p_index, p in enumerate(p_values):
        rng = derive_rng(cfg.base_seed, Stream.BEAMS, region_index, replicate, p_index)
        configs, k = random_beam_configs(topo, p, rng, make_beam)
        graph = build_link_graph(topo, configs)
        reports.append(
            compute_report(
                graph,
                baseline,
                topo,
                seed=topo.seed or 0,
                model=cfg.model,
                p=p,
                beamformer_frac=k / topo.n_nodes,
                diameter=diameter,
            )
        )
    logger.debug(
        "experiments.replicate_done",
        study=cfg.study,
        region=region_index,
        replicate=replicate,
        beam_ratio=sector_beam_length(theta, topo.omni_range) / diameter,
    )
    return ReplicateResult(region_index=region_index, replicate=replicate, reports=reports)


def self_organize(
    topo: Topology,
    warm: WarmupResult,
    beta: float,
    thetas: list[float],
    *,
    model: AntennaModel,
    alpha: float,
    ula_mode: UlaReachMode,
) -> tuple[DecisionOutcome, DirectedLinkGraph]:
    """Decision phase on a copy of the warmed-up states, checked for
    suppression violations, and the resulting link graph."""
    states = copy.deepcopy(warm.states)
    outcome = apply_decisions(
        topo, states, beta, thetas, model=model, alpha=alpha, ula_mode=ula_mode
    )
    violations = check_suppression(outcome.decisions, topo, outcome.configs)
    if violations:
        raise InvariantError(
            f"beamformers inside an earlier beamformer's footprint: {violations[:5]}"
        )
    return outcome, build_link_graph(topo, outcome.configs)


def wfb_replicate(cfg: ExperimentConfig, region_index: int, replicate: int) -> ReplicateResult:
    """Warm up once, then apply the decision rule for every configured beta."""
    topo = replicate_topology(cfg, region_index, replicate)
    omni_graph = omni_link_graph(topo)
    baseline = baseline_stats(omni_graph)
    diameter = euclidean_diameter(topo)
    seed = unit_seed(cfg.base_seed, Stream.TRAFFIC, region_index, replicate)
    flows = generate_traffic(topo, cfg.source_fraction, seed, graph=omni_graph)
    warm = run_warmup(topo, flows, seed)
    thetas = per_node_theta(topo, cfg.theta_grid)
    reports: list[MetricsReport] = []
    decisions: dict[float, list[DecisionRecord]] = {}
    for beta in cfg.betas:
        outcome, graph = self_organize(
            topo,
            warm,
            beta,
            thetas,
            model=cfg.model,
            alpha=cfg.alpha,
            ula_mode=cfg.ula_reach_mode,
        )
        beamformers = outcome.beamformers
        fraction = len(beamformers) / topo.n_nodes
        reports.append(
            compute_report(
                graph,
                baseline,
                topo,
                seed=topo.seed or 0,
                model=cfg.model,
                p=fraction,
                beta=beta,
                beamformer_frac=fraction,
                diameter=diameter,
            )
        )
        decisions[beta] = outcome.decisions
        if beamformers:
            lengths = [sector_beam_length(thetas[v], topo.omni_range) for v in beamformers]
            logger.debug(
                "experiments.wfb_beams",
                region=region_index,
                replicate=replicate,
                beta=beta,
                beamformers=len(beamformers),
                beam_ratio=float(np.mean(lengths)) / diameter,
            )
    return ReplicateResult(
        region_index=region_index,
        replicate=replicate,
        reports=reports,
        decisions=decisions,
    )
