"""Drive the studies over seeded replicates on worker threads."""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from functools import partial
from typing import Any

import anyio
import anyio.to_thread
import numpy as np

from ..errors import InvalidParameterError
from ..log import get_logger
from ..metrics import GrowthFit, MetricsReport, linear_growth_fit, log_growth_fit
from ..wfb import DecisionRecord
from .config import ExperimentConfig, Study
from .studies import ReplicateResult, rand_p_replicate, wfb_replicate

logger = get_logger(__name__)

type DecisionKey = tuple[int, int, float]


@dataclass(frozen=True, slots=True)
class FitRow:
    study: str
    slope: float
    intercept: float
    r2: float

    @classmethod
    def from_fit(cls, study: str, fit: GrowthFit) -> FitRow:
        return cls(study=study, slope=fit.slope, intercept=fit.intercept, r2=fit.r_squared)


@dataclass(frozen=True, slots=True)
class StudyResult:
    """Rows in (region, parameter, replicate) order plus study-specific extras.

    ``decision_logs`` is keyed by (region index, replicate, beta).
    """

    study: Study
    reports: list[MetricsReport]
    fits: list[FitRow] = field(default_factory=list)
    decision_logs: dict[DecisionKey, list[DecisionRecord]] = field(default_factory=dict)


async def run_units[T](
    work: Callable[..., T],
    units: Sequence[tuple[Any, ...]],
    *,
    workers: int,
) -> list[T]:
    """Run ``work(*unit)`` for every unit on at most ``workers`` threads.

    Results come back in unit order whatever order the threads finish in.
    """
    if workers < 1:
        raise InvalidParameterError(f"workers must be at least 1, got {workers}")
    limiter = anyio.CapacityLimiter(workers)
    results: list[T | None] = [None] * len(units)

    async def _run(index: int, unit: tuple[Any, ...]) -> None:
        results[index] = await anyio.to_thread.run_sync(
            partial(work, *unit), limiter=limiter
        )

    async with anyio.create_task_group() as tg:
        for index, unit in enumerate(units):
            tg.start_soon(_run, index, unit)
    return results  # type: ignore[return-value]


def _run_replicates[T](
    work: Callable[..., T], units: Sequence[tuple[Any, ...]], workers: int
) -> list[T]:
    # anyio.run only accepts positional args, so bind the rest first
    return anyio.run(partial(run_units, work, units, workers=workers))


def _units(cfg: ExperimentConfig, *extra: Any) -> list[tuple[Any, ...]]:
    return [
        (cfg, region_index, replicate, *extra)
        for region_index in range(len(cfg.regions()))
        for replicate in range(cfg.replicates)
    ]


def _merge(results: Sequence[ReplicateResult], n_params: int) -> list[MetricsReport]:
    ordered = sorted(results, key=lambda r: (r.region_index, r.replicate))
    reports: list[MetricsReport] = []
    for region_index in sorted({r.region_index for r in ordered}):
        region = [r for r in ordered if r.region_index == region_index]
        for param_index in range(n_params):
            reports.extend(r.reports[param_index] for r in region)
    return reports


def run_rand_p_sweep(cfg: ExperimentConfig, *, workers: int = 1) -> StudyResult:
    """Randomly rewired networks over the configured p grid (p=0 included)."""
    p_values = cfg.sweep_p_values()
    results = _run_replicates(rand_p_replicate, _units(cfg, p_values), workers)
    reports = _merge(results, len(p_values))
    logger.info(
        "experiments.study_done",
        study="rand_p_sweep",
        rows=len(reports),
        workers=workers,
    )
    return StudyResult(study="rand_p_sweep", reports=reports)


def _region_means(
    reports: Sequence[MetricsReport], column: str
) -> list[tuple[float, float]]:
    by_region: dict[tuple[float, float], list[MetricsReport]] = {}
    for report in reports:
        by_region.setdefault((report.width, report.height), []).append(report)
    return [
        (
            float(np.mean([r.d for r in rows])),
            float(np.mean([getattr(r, column) for r in rows])),
        )
        for rows in by_region.values()
    ]


def diameter_fits(reports: Sequence[MetricsReport]) -> list[FitRow]:
    """Log and linear growth of the rewired and baseline APL against D."""
    rewired = _region_means(reports, "apl")
    baseline = _region_means(reports, "apl0")
    return [
        FitRow.from_fit("diameter_sweep", log_growth_fit(rewired)),
        FitRow.from_fit("diameter_sweep_linear", linear_growth_fit(rewired)),
        FitRow.from_fit("diameter_sweep_baseline", log_growth_fit(baseline)),
        FitRow.from_fit("diameter_sweep_baseline_linear", linear_growth_fit(baseline)),
    ]


def run_diameter_sweep(cfg: ExperimentConfig, *, workers: int = 1) -> StudyResult:
    """Randomized rewiring at a single p over growing regions of constant density."""
    if len(cfg.regions()) < 3:
        raise InvalidParameterError("a diameter sweep needs at least 3 region sizes")
    results = _run_replicates(rand_p_replicate, _units(cfg, [cfg.p]), workers)
    reports = _merge(results, 1)
    fits = diameter_fits(reports)
    logger.info(
        "experiments.study_done",
        study="diameter_sweep",
        rows=len(reports),
        log_r2=fits[0].r2,
        linear_r2=fits[1].r2,
        workers=workers,
    )
    return StudyResult(study="diameter_sweep", reports=reports, fits=fits)


def run_wfb_sweep(cfg: ExperimentConfig, *, workers: int = 1) -> StudyResult:
    """Traffic-driven self-organisation over regions, replicates and betas."""
    results = _run_replicates(wfb_replicate, _units(cfg), workers)
    reports = _merge(results, len(cfg.betas))
    decision_logs: dict[DecisionKey, list[DecisionRecord]] = {}
    for result in sorted(results, key=lambda r: (r.region_index, r.replicate)):
        for beta, decisions in result.decisions.items():
            decision_logs[(result.region_index, result.replicate, beta)] = decisions
    fractions = [r.beamformer_frac for r in reports]
    logger.info(
        "experiments.study_done",
        study="wfb_sweep",
        rows=len(reports),
        mean_beamformer_frac=float(np.mean(fractions)) if fractions else math.nan,
        workers=workers,
    )
    return StudyResult(study="wfb_sweep", reports=reports, decision_logs=decision_logs)


def run_study(cfg: ExperimentConfig, *, workers: int = 1) -> StudyResult:
    match cfg.study:
        case "rand_p_sweep":
            return run_rand_p_sweep(cfg, workers=workers)
        case "diameter_sweep":
            return run_diameter_sweep(cfg, workers=workers)
        case "wfb_sweep":
            return run_wfb_sweep(cfg, workers=workers)
