"""Plot-ready text files from a results table.

Each series is written as ``<figure>_<series>.dat`` with whitespace-separated
``x y [std]`` columns at 6 significant digits, so any plotting tool can read it.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from pathlib import Path
from typing import Literal, get_args

import numpy as np
import pandas as pd

from .errors import InvalidParameterError, MissingColumnError
from .log import get_logger
from .metrics import log_growth_fit

logger = get_logger(__name__)

Figure = Literal["fig2a", "fig2b", "fig3", "fig5a", "fig5b"]
FIGURES: tuple[Figure, ...] = get_args(Figure)

PLOT_FORMAT = "%.6g"
FIT_SAMPLES = 50

_REQUIRED: dict[Figure, tuple[str, ...]] = {
    "fig2a": ("model", "p", "apl", "apl0", "c", "c0"),
    "fig2b": ("model", "p", "uni_frac"),
    "fig3": ("width", "height", "d", "apl"),
    "fig5a": ("width", "height", "beta", "d", "apl", "apl0"),
    "fig5b": ("width", "height", "beta", "d", "uni_frac"),
}


def _check_columns(frame: pd.DataFrame, figure: Figure) -> None:
    for column in _REQUIRED[figure]:
        if column not in frame.columns:
            raise MissingColumnError(column, context=figure)


def _split(frame: pd.DataFrame, column: str, label: str) -> Iterator[tuple[str, pd.DataFrame]]:
    """Yield (series suffix, rows); no suffix when ``column`` has a single value."""
    values = frame[column].drop_duplicates().tolist()
    if len(values) <= 1:
        yield "", frame
        return
    for value in values:
        text = f"{value:g}" if isinstance(value, float) else str(value)
        yield f"_{label}{text}", frame[frame[column] == value]


def _by_x(frame: pd.DataFrame, x: str, y: pd.Series) -> np.ndarray:
    grouped = y.groupby(frame[x], sort=True)
    return np.column_stack(
        [
            grouped.mean().index.to_numpy(dtype=float),
            grouped.mean().to_numpy(dtype=float),
            grouped.std(ddof=1).fillna(0.0).to_numpy(dtype=float),
        ]
    )


def _by_region(frame: pd.DataFrame, y: pd.Series) -> np.ndarray:
    keys = [frame["width"], frame["height"]]
    d = frame["d"].groupby(keys, sort=False).mean()
    grouped = y.groupby(keys, sort=False)
    table = np.column_stack(
        [
            d.to_numpy(dtype=float),
            grouped.mean().to_numpy(dtype=float),
            grouped.std(ddof=1).fillna(0.0).to_numpy(dtype=float),
        ]
    )
    return table[np.argsort(table[:, 0], kind="stable")]


def _save(data: np.ndarray, path: Path, header: Sequence[str]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, data, fmt=PLOT_FORMAT, header=" ".join(header))
    return path


def _series(
    figure: Figure, frame: pd.DataFrame
) -> Iterator[tuple[str, np.ndarray, tuple[str, ...]]]:
    match figure:
        case "fig2a":
            for suffix, rows in _split(frame, "model", ""):
                l_ratio = rows["apl"] / rows["apl0"]
                c_ratio = (rows["c"] / rows["c0"]).where(rows["c0"] > 0)
                yield f"L_ratio{suffix}", _by_x(rows, "p", l_ratio), ("p", "L_ratio", "std")
                yield f"C_ratio{suffix}", _by_x(rows, "p", c_ratio), ("p", "C_ratio", "std")
        case "fig2b":
            for suffix, rows in _split(frame, "model", ""):
                table = _by_x(rows, "p", rows["uni_frac"])
                yield f"unidirectional{suffix}", table, ("p", "uni_frac", "std")
        case "fig3":
            table = _by_region(frame, frame["apl"])
            yield "apl", table, ("D", "apl", "std")
            fit = log_growth_fit([(float(x), float(y)) for x, y in table[:, :2]])
            xs = np.geomspace(table[0, 0], table[-1, 0], FIT_SAMPLES)
            samples = np.column_stack([xs, fit.slope * np.log(xs) + fit.intercept])
            yield "log_fit", samples, ("D", "apl_fit")
        case "fig5a":
            for suffix, rows in _split(frame, "beta", "beta"):
                table = _by_region(rows, 1.0 - rows["apl"] / rows["apl0"])
                yield f"apl_reduction{suffix}", table, ("D", "apl_reduction", "std")
        case "fig5b":
            for suffix, rows in _split(frame, "beta", "beta"):
                table = _by_region(rows, rows["uni_frac"])
                yield f"uni{suffix}", table, ("D", "uni_frac", "std")


def emit_plotdata(frame: pd.DataFrame, figure: str, out_dir: Path) -> list[Path]:
    """Write every series of ``figure`` under ``out_dir`` and return the paths."""
    if figure not in FIGURES:
        raise InvalidParameterError(
            f"unknown figure {figure!r}; expected one of {', '.join(FIGURES)}"
        )
    fig: Figure = figure  # type: ignore[assignment]
    _check_columns(frame, fig)
    if frame.empty:
        raise InvalidParameterError("results table has no rows")
    written = [
        _save(data, out_dir / f"{fig}_{name}.dat", header)
        for name, data, header in _series(fig, frame)
    ]
    logger.info("plotdata.written", figure=fig, files=len(written))
    return written


def load_series(path: Path) -> np.ndarray:
    """Read a ``.dat`` series back as rows of ``x y [std]``."""
    try:
        return np.loadtxt(path, ndmin=2)
    except (OSError, ValueError) as exc:
        raise InvalidParameterError(f"cannot read plot series {path}: {exc}") from exc
