"""swbeam command line: topology generation, single runs, sweeps and plot data."""

from __future__ import annotations

import argparse
import sys
from collections.abc import Callable
from functools import partial
from pathlib import Path

from rich import box
from rich.console import Console
from rich.table import Table

from . import __version__
from .antenna import (
    DEFAULT_PATH_LOSS_EXPONENT,
    AntennaConfig,
    Ula,
    export_gain_pattern,
    map_sector_to_ula,
    optimal_beamwidth,
    sector_beam_length,
    theta_grid_from,
)
from .errors import SwbeamError
from .experiments import (
    build_experiment_config,
    load_experiment_config,
    read_results,
    reports_frame,
    run_study,
    write_decision_logs,
    write_fits,
    write_results,
)
from .experiments.studies import random_beam_configs, self_organize
from .linkgraph import (
    DirectedLinkGraph,
    build_link_graph,
    export_edges,
    load_edges,
    omni_link_graph,
)
from .log import configure_logging, get_logger
from .metrics import (
    MetricsReport,
    baseline_stats,
    compute_report,
    long_link_fraction,
    unidirectional_node_fraction,
    wfb_rank_correlation,
)
from .plotdata import FIGURES, emit_plotdata
from .seeds import Stream, derive_rng
from .settings import Settings, load_settings
from .topology import (
    Topology,
    generate_connected_topology,
    generate_topology,
    load_topology,
    mean_omni_degree,
    save_topology,
)
from .wfb import (
    beamformed_config,
    export_decisions,
    export_events,
    generate_traffic,
    per_node_theta,
    run_warmup,
)

logger = get_logger(__name__)

stderr = Console(stderr=True)


def _add_antenna_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--model", choices=("sector", "ula"), default="sector")
    parser.add_argument(
        "--alpha",
        type=float,
        default=DEFAULT_PATH_LOSS_EXPONENT,
        help="Path loss exponent for ULA reach (default: %(default)s)",
    )
    parser.add_argument(
        "--ula-reach-mode",
        choices=("calibrated", "path_loss"),
        default="calibrated",
        help="calibrated: peak reach equals the sector beam length (default)",
    )
    parser.add_argument(
        "--theta-grid",
        type=_float_list,
        default=None,
        help="Comma-separated candidate beam widths in radians (default: 2π/k², k=1..8)",
    )


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if value < 0:
        raise argparse.ArgumentTypeError(f"seed must be non-negative, got {value}")
    return value


def _float_list(text: str) -> list[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a list of numbers: {text!r}") from exc


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swbeam")
    parser.add_argument(
        "--version",
        action="version",
        version=f"%(prog)s {__version__}",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help="Replicate worker threads, 0 = one per CPU (default: $SWBEAM_THREADS or 0)",
    )
    parser.add_argument("--log-format", choices=("console", "json"), default=None)
    parser.add_argument(
        "--log-level",
        choices=("debug", "info", "warning", "error", "critical"),
        default=None,
    )
    parser.add_argument(
        "--quiet",
        action="store_true",
        default=False,
        help="Only log errors and skip the terminal summary.",
    )

    sub = parser.add_subparsers(dest="cmd", required=True)

    generate = sub.add_parser("generate", help="Place nodes uniformly in a rectangle")
    generate.add_argument("--nodes", type=int, required=True)
    generate.add_argument("--width", type=float, required=True)
    generate.add_argument("--height", type=float, default=None, help="Default: width")
    generate.add_argument("--seed", type=_seed, required=True)
    generate.add_argument("--range", dest="omni_range", type=float, default=1.0)
    generate.add_argument(
        "--connected",
        action="store_true",
        default=False,
        help="Redraw with seed+1, seed+2, ... until the omni network is connected.",
    )
    generate.add_argument("--max-resamples", type=int, default=100)
    generate.add_argument("--out", type=Path, required=True)

    randbeam = sub.add_parser(
        "randbeam", help="Give a random fraction p of nodes a random long range beam"
    )
    randbeam.add_argument("--topo", type=Path, required=True)
    randbeam.add_argument("--p", type=float, required=True)
    randbeam.add_argument("--seed", type=_seed, default=0)
    _add_antenna_flags(randbeam)
    randbeam.add_argument(
        "--theta", type=float, default=None, help="Fixed sector beam width (sector only)"
    )
    randbeam.add_argument(
        "--elements",
        type=int,
        default=None,
        help="Fixed ULA element count with path-loss reach (ula only)",
    )
    randbeam.add_argument(
        "--gain-pattern-out",
        type=Path,
        default=None,
        help="Write the beamformers' phi,gain pattern at boresight 0 (ula only)",
    )
    randbeam.add_argument("--edges-out", type=Path, default=None)
    randbeam.add_argument("--out", type=Path, default=None, help="Default: stdout")

    wfb = sub.add_parser("wfb", help="Warm up with traffic, then self-organize by WFB")
    wfb.add_argument("--topo", type=Path, required=True)
    wfb.add_argument("--seed", type=_seed, default=0)
    wfb.add_argument("--source-fraction", type=float, default=0.5)
    wfb.add_argument("--beta", type=float, default=0.2)
    _add_antenna_flags(wfb)
    wfb.add_argument(
        "--rank-correlation",
        action="store_true",
        default=False,
        help="Compare the WFB estimates with exact betweenness (slow for large N)",
    )
    wfb.add_argument("--events-out", type=Path, default=None)
    wfb.add_argument("--decisions-out", type=Path, default=None)
    wfb.add_argument("--edges-out", type=Path, default=None)
    wfb.add_argument("--out", type=Path, default=None, help="Default: stdout")

    sweep = sub.add_parser("sweep", help="Run a study over seeded replicates")
    sweep.add_argument("--study", default=None, help="rand_p, diameter or wfb")
    sweep.add_argument("--config", type=Path, default=None)
    sweep.add_argument("--replicates", type=int, default=None)
    sweep.add_argument("--seed", dest="base_seed", type=_seed, default=None)
    sweep.add_argument("--out", type=Path, required=True)
    sweep.add_argument(
        "--fit-out", type=Path, default=None, help="Default: fit.csv next to --out"
    )
    sweep.add_argument(
        "--decisions-dir",
        type=Path,
        default=None,
        help="Write every WFB decision log into this directory",
    )

    metrics = sub.add_parser("metrics", help="Measure an edge list against its omni baseline")
    metrics.add_argument("--topo", type=Path, required=True)
    metrics.add_argument("--edges", type=Path, required=True)
    metrics.add_argument("--model", choices=("sector", "ula"), default="sector")
    metrics.add_argument("--seed", type=_seed, default=None, help="Default: topology seed")
    metrics.add_argument("--out", type=Path, default=None, help="Default: stdout")

    plotdata = sub.add_parser("plotdata", help="Emit plot-ready series from a results CSV")
    plotdata.add_argument("--results", type=Path, required=True)
    plotdata.add_argument("--figure", choices=FIGURES, required=True)
    plotdata.add_argument("--out-dir", type=Path, default=Path("."))

    return parser


def _check_flags(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    if args.cmd != "randbeam":
        return
    if args.model == "ula" and args.theta is not None:
        parser.error("--theta applies to the sector model; use --elements with --model ula")
    if args.model == "sector" and args.elements is not None:
        parser.error("--elements applies to the ula model")
    if args.model == "sector" and args.gain_pattern_out is not None:
        parser.error("--gain-pattern-out applies to the ula model")
    if not 0.0 <= args.p <= 1.0:
        parser.error(f"--p must lie in [0, 1], got {args.p}")


def _emit_report(report: MetricsReport, out: Path | None) -> None:
    frame = reports_frame([report])
    if out is None:
        sys.stdout.write(frame.to_csv(index=False, float_format="%.17g", lineterminator="\n"))
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(out, index=False, float_format="%.17g", lineterminator="\n")


def _print_summary(title: str, rows: dict[str, object], *, quiet: bool) -> None:
    if quiet:
        return
    table = Table(title=title, show_header=False, box=box.SIMPLE)
    table.add_column("metric")
    table.add_column("value", justify="right")
    for key, value in rows.items():
        text = f"{value:.4g}" if isinstance(value, float) else str(value)
        table.add_row(key, text)
    stderr.print(table)


def _report_rows(
    report: MetricsReport, graph: DirectedLinkGraph, topo: Topology
) -> dict[str, object]:
    return {
        "nodes": report.n,
        "beamformers": report.beamformer_frac,
        "L(p)/L(0)": report.apl_ratio,
        "C(p)/C(0)": report.clustering_ratio,
        "unidirectional pairs": report.uni_frac,
        "unreachable pairs": report.unreach_frac,
        "unidirectional nodes": unidirectional_node_fraction(graph),
        "long links": long_link_fraction(graph, topo),
        "diameter D": report.d,
    }


def _cmd_generate(args: argparse.Namespace, settings: Settings) -> None:
    height = args.width if args.height is None else args.height
    if args.connected:
        topo = generate_connected_topology(
            args.nodes,
            args.width,
            height,
            args.seed,
            omni_range=args.omni_range,
            max_resamples=args.max_resamples,
        )
    else:
        topo = generate_topology(
            args.nodes, args.width, height, args.seed, omni_range=args.omni_range
        )
    save_topology(topo, args.out)
    logger.info("cli.topology_written", path=str(args.out), nodes=topo.n_nodes)
    _print_summary(
        "topology",
        {"nodes": topo.n_nodes, "seed": topo.seed, "mean degree": mean_omni_degree(topo)},
        quiet=args.quiet,
    )


def _cmd_randbeam(args: argparse.Namespace, settings: Settings) -> None:
    topo = load_topology(args.topo)
    r = topo.omni_range
    make_beam: Callable[[float], AntennaConfig]
    if args.elements is not None:
        elements = args.elements
        make_beam = partial(_fixed_ula, elements=elements, alpha=args.alpha)
    else:
        theta = args.theta
        if theta is None:
            grid = theta_grid_from(args.theta_grid)
            theta = optimal_beamwidth(grid, r, mean_omni_degree(topo))
        elements = map_sector_to_ula(sector_beam_length(theta, r), r)
        make_beam = partial(
            _beam,
            model=args.model,
            theta=theta,
            r=r,
            alpha=args.alpha,
            ula_mode=args.ula_reach_mode,
        )
    configs, k = random_beam_configs(
        topo, args.p, derive_rng(args.seed, Stream.BEAMS), make_beam
    )
    graph = build_link_graph(topo, configs)
    report = compute_report(
        graph,
        baseline_stats(omni_link_graph(topo)),
        topo,
        seed=args.seed,
        model=args.model,
        p=args.p,
        beamformer_frac=k / topo.n_nodes,
    )
    if args.edges_out is not None:
        export_edges(graph, args.edges_out)
    if args.gain_pattern_out is not None:
        export_gain_pattern(args.gain_pattern_out, elements, 0.0)
    _emit_report(report, args.out)
    _print_summary("randbeam", _report_rows(report, graph, topo), quiet=args.quiet)


def _fixed_ula(orientation: float, *, elements: int, alpha: float) -> AntennaConfig:
    return Ula(elements=elements, boresight=orientation, path_loss_exponent=alpha)


def _beam(
    orientation: float,
    *,
    model: str,
    theta: float,
    r: float,
    alpha: float,
    ula_mode: str,
) -> AntennaConfig:
    return beamformed_config(
        model,  # type: ignore[arg-type]
        theta,
        orientation,
        r,
        alpha=alpha,
        ula_mode=ula_mode,  # type: ignore[arg-type]
    )


def _cmd_wfb(args: argparse.Namespace, settings: Settings) -> None:
    topo = load_topology(args.topo)
    omni_graph = omni_link_graph(topo)
    flows = generate_traffic(topo, args.source_fraction, args.seed, graph=omni_graph)
    warm = run_warmup(topo, flows, args.seed)
    thetas = per_node_theta(topo, theta_grid_from(args.theta_grid))
    outcome, graph = self_organize(
        topo,
        warm,
        args.beta,
        thetas,
        model=args.model,
        alpha=args.alpha,
        ula_mode=args.ula_reach_mode,
    )
    fraction = len(outcome.beamformers) / topo.n_nodes
    report = compute_report(
        graph,
        baseline_stats(omni_graph),
        topo,
        seed=args.seed,
        model=args.model,
        p=fraction,
        beta=args.beta,
        beamformer_frac=fraction,
    )
    if args.events_out is not None:
        export_events(warm.events, args.events_out)
    if args.decisions_out is not None:
        export_decisions(outcome.decisions, args.decisions_out)
    if args.edges_out is not None:
        export_edges(graph, args.edges_out)
    _emit_report(report, args.out)
    rows: dict[str, object] = {
        "flows": len(flows),
        "slots": len(warm.events),
        **_report_rows(report, graph, topo),
    }
    if args.rank_correlation:
        estimates = [warm.states[v].w for v in range(topo.n_nodes)]
        rows["WFB rank correlation"] = wfb_rank_correlation(estimates, omni_graph)
    _print_summary("wfb", rows, quiet=args.quiet)


def _cmd_sweep(args: argparse.Namespace, settings: Settings) -> None:
    overrides = {
        "study": args.study,
        "replicates": args.replicates,
        "base_seed": args.base_seed,
    }
    if args.config is not None:
        cfg = load_experiment_config(args.config, **overrides)
    else:
        values = {key: value for key, value in overrides.items() if value is not None}
        cfg = build_experiment_config(values, source="command line")
    workers = settings.worker_count()
    logger.info(
        "cli.sweep_started",
        study=cfg.study,
        regions=len(cfg.regions()),
        replicates=cfg.replicates,
        workers=workers,
    )
    result = run_study(cfg, workers=workers)
    summary = write_results(result.reports, args.out)
    if result.fits:
        write_fits(result.fits, args.fit_out or args.out.with_name("fit.csv"))
    if args.decisions_dir is not None and result.decision_logs:
        write_decision_logs(result.decision_logs, args.decisions_dir)
    rows: dict[str, object] = {"rows": len(result.reports), "summary": str(summary)}
    for fit in result.fits:
        rows[f"{fit.study} r²"] = fit.r2
    _print_summary(cfg.study, rows, quiet=args.quiet)


def _cmd_metrics(args: argparse.Namespace, settings: Settings) -> None:
    topo = load_topology(args.topo)
    graph = load_edges(args.edges, topo.n_nodes)
    omni_graph = omni_link_graph(topo)
    # nodes whose out-neighbourhood differs from the omni disc are taken as beamformers
    changed = sum(
        a != b
        for a, b in zip(graph.out_adjacency, omni_graph.out_adjacency, strict=True)
    )
    fraction = changed / topo.n_nodes
    seed = args.seed if args.seed is not None else (topo.seed or 0)
    report = compute_report(
        graph,
        baseline_stats(omni_graph),
        topo,
        seed=seed,
        model=args.model,
        p=fraction,
        beamformer_frac=fraction,
    )
    _emit_report(report, args.out)
    _print_summary("metrics", _report_rows(report, graph, topo), quiet=args.quiet)


def _cmd_plotdata(args: argparse.Namespace, settings: Settings) -> None:
    frame = read_results(args.results)
    written = emit_plotdata(frame, args.figure, args.out_dir)
    for path in written:
        logger.debug("cli.plotdata_file", path=str(path))
    _print_summary(
        args.figure,
        {"rows": len(frame), **{path.name: str(path.parent) for path in written}},
        quiet=args.quiet,
    )


COMMANDS: dict[str, Callable[[argparse.Namespace, Settings], None]] = {
    "generate": _cmd_generate,
    "randbeam": _cmd_randbeam,
    "wfb": _cmd_wfb,
    "sweep": _cmd_sweep,
    "metrics": _cmd_metrics,
    "plotdata": _cmd_plotdata,
}


def main(argv: list[str] | None = None) -> None:
    parser = _build_parser()
    args = parser.parse_args(argv)
    _check_flags(parser, args)

    try:
        settings = load_settings(
            threads=args.threads,
            log_format=args.log_format,
            log_level="error" if args.quiet else args.log_level,
        )
    except ValueError as exc:
        parser.error(str(exc))
    configure_logging(settings.log_level, settings.log_format)

    command = COMMANDS.get(args.cmd)
    if command is None:
        parser.error(f"unknown command: {args.cmd}")
    try:
        command(args, settings)
    except SwbeamError as exc:
        logger.error("cli.failed", cmd=args.cmd, error=str(exc), error_type=type(exc).__name__)
        raise SystemExit(1) from exc


if __name__ == "__main__":  # pragma: no cover
    main(sys.argv[1:])
