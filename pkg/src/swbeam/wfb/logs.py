"""CSV export and import of warm-up event logs and decision logs."""

from __future__ import annotations

import math
from collections.abc import Sequence
from pathlib import Path

import pandas as pd

from ..errors import MissingColumnError
from .state import DecisionRecord, SlotEvent

EVENT_COLUMNS = ("slot", "transmitter", "flow_src", "flow_dst", "hop_index", "w_after", "g_after")
DECISION_COLUMNS = ("order", "node", "w", "decision", "suppressor", "orientation_rad", "theta_rad")

_FLOAT_FORMAT = "%.17g"


def _write(frame: pd.DataFrame, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=_FLOAT_FORMAT, lineterminator="\n")


def _read(path: Path, columns: Sequence[str]) -> pd.DataFrame:
    frame = pd.read_csv(path, float_precision="round_trip", keep_default_na=False)
    for column in columns:
        if column not in frame.columns:
            raise MissingColumnError(column, context=str(path))
    return frame


def events_frame(events: Sequence[SlotEvent]) -> pd.DataFrame:
    return pd.DataFrame(
        [
            (e.slot, e.transmitter, e.flow_src, e.flow_dst, e.hop_index, e.w_after, e.g_after)
            for e in events
        ],
        columns=list(EVENT_COLUMNS),
    )


def export_events(events: Sequence[SlotEvent], path: Path) -> None:
    _write(events_frame(events), path)


def load_events(path: Path) -> list[SlotEvent]:
    frame = _read(path, EVENT_COLUMNS)
    return [
        SlotEvent(
            slot=int(row.slot),
            transmitter=int(row.transmitter),
            flow_src=int(row.flow_src),
            flow_dst=int(row.flow_dst),
            hop_index=int(row.hop_index),
            w_after=float(row.w_after),
            g_after=int(row.g_after),
        )
        for row in frame.itertuples(index=False)
    ]


def _blank_nan(value: float) -> float | str:
    return "" if math.isnan(value) else value


def decisions_frame(decisions: Sequence[DecisionRecord]) -> pd.DataFrame:
    return pd.DataFrame(
        [
            (
                d.order,
                d.node,
                d.w,
                int(d.decision),
                "" if d.suppressor is None else d.suppressor,
                _blank_nan(d.orientation),
                _blank_nan(d.theta),
            )
            for d in decisions
        ],
        columns=list(DECISION_COLUMNS),
    )


def export_decisions(decisions: Sequence[DecisionRecord], path: Path) -> None:
    _write(decisions_frame(decisions), path)


def _optional_float(raw: object) -> float:
    return math.nan if raw == "" else float(raw)  # type: ignore[arg-type]


def load_decisions(path: Path) -> list[DecisionRecord]:
    frame = _read(path, DECISION_COLUMNS)
    return [
        DecisionRecord(
            order=int(row.order),
            node=int(row.node),
            w=float(row.w),
            decision=bool(int(row.decision)),
            suppressor=None if row.suppressor == "" else int(row.suppressor),
            orientation=_optional_float(row.orientation_rad),
            theta=_optional_float(row.theta_rad),
        )
        for row in frame.itertuples(index=False)
    ]
