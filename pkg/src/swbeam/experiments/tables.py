"""Result tables: the fixed-column results CSV, its summary and ``fit.csv``."""

from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path

import pandas as pd

from ..errors import InvalidParameterError, MissingColumnError
from ..metrics import REPORT_COLUMNS, MetricsReport
from ..wfb import DecisionRecord, export_decisions
from .runner import DecisionKey, FitRow

FLOAT_FORMAT = "%.17g"
FIT_COLUMNS = ("study", "slope", "intercept", "r2")
SUMMARY_METRICS = (
    "apl0",
    "apl",
    "c0",
    "c",
    "apl_ratio",
    "c_ratio",
    "uni_frac",
    "unreach_frac",
    "beamformer_frac",
    "d",
)


def _write(frame: pd.DataFrame, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def reports_frame(reports: Sequence[MetricsReport]) -> pd.DataFrame:
    return pd.DataFrame([r.to_row() for r in reports], columns=list(REPORT_COLUMNS))


def summary_path(path: Path) -> Path:
    return path.with_name(f"{path.stem}_summary{path.suffix or '.csv'}")


def write_results(reports: Sequence[MetricsReport], path: Path) -> Path:
    """Write the rows and their summary; returns the summary's path."""
    frame = reports_frame(reports)
    _write(frame, path)
    target = summary_path(path)
    if not frame.empty:
        _write(summarize(frame), target)
    return target


def read_results(path: Path) -> pd.DataFrame:
    frame = pd.read_csv(path, float_precision="round_trip")
    for column in REPORT_COLUMNS:
        if column not in frame.columns:
            raise MissingColumnError(column, context=str(path))
    return frame


def with_ratios(frame: pd.DataFrame) -> pd.DataFrame:
    out = frame.copy()
    out["apl_ratio"] = out["apl"] / out["apl0"]
    out["c_ratio"] = (out["c"] / out["c0"]).where(out["c0"] > 0)
    return out


def summary_keys(frame: pd.DataFrame) -> list[str]:
    """Rows with a decision threshold group by beta, the rest by p."""
    sweep_axis = "beta" if frame["beta"].notna().any() else "p"
    return ["model", "width", "height", sweep_axis]


def summarize(frame: pd.DataFrame) -> pd.DataFrame:
    """Per-group mean, sample std and replicate count of every metric."""
    if frame.empty:
        raise InvalidParameterError("cannot summarize an empty results table")
    keys = summary_keys(frame)
    grouped = with_ratios(frame).groupby(keys, sort=False, dropna=False)
    summary = grouped.size().rename("replicates").to_frame()
    summary["n"] = grouped["n"].mean()
    for metric in SUMMARY_METRICS:
        summary[f"{metric}_mean"] = grouped[metric].mean()
        summary[f"{metric}_std"] = grouped[metric].std(ddof=1)
    return summary.reset_index()


def read_summary(path: Path) -> pd.DataFrame:
    """Load a table written by :func:`summarize` next to the results."""
    frame = pd.read_csv(path, float_precision="round_trip")
    for column in ("model", "width", "height", "replicates"):
        if column not in frame.columns:
            raise MissingColumnError(column, context=str(path))
    if "p" not in frame.columns and "beta" not in frame.columns:
        raise MissingColumnError("p", context=str(path))
    return frame


def fits_frame(fits: Sequence[FitRow]) -> pd.DataFrame:
    return pd.DataFrame(
        [(f.study, f.slope, f.intercept, f.r2) for f in fits], columns=list(FIT_COLUMNS)
    )


def write_fits(fits: Sequence[FitRow], path: Path) -> None:
    _write(fits_frame(fits), path)


def read_fits(path: Path) -> list[FitRow]:
    frame = pd.read_csv(path, float_precision="round_trip")
    for column in FIT_COLUMNS:
        if column not in frame.columns:
            raise MissingColumnError(column, context=str(path))
    return [
        FitRow(
            study=str(row.study),
            slope=float(row.slope),
            intercept=float(row.intercept),
            r2=float(row.r2),
        )
        for row in frame.itertuples(index=False)
    ]


def write_decision_logs(
    logs: dict[DecisionKey, list[DecisionRecord]], directory: Path
) -> list[Path]:
    """One decision CSV per (region, replicate, beta)."""
    written: list[Path] = []
    for (region_index, replicate, beta), decisions in sorted(logs.items()):
        path = directory / f"decisions_r{region_index}_rep{replicate}_beta{beta:g}.csv"
        export_decisions(decisions, path)
        written.append(path)
    return written
