"""Exception hierarchy for swbeam."""

from __future__ import annotations


class SwbeamError(Exception):
    """Base class for every error raised deliberately by swbeam."""


class InvalidParameterError(SwbeamError, ValueError):
    """An argument is outside the domain an operation accepts."""


class EmptyGraphError(SwbeamError):
    """A path statistic was requested on a graph with no reachable pairs."""


class ConfigError(SwbeamError):
    """An experiment config file or command line is invalid."""


class TopologyFormatError(SwbeamError):
    """A topology or edge-list file could not be parsed."""


class DisconnectedTopologyError(SwbeamError):
    """No connected placement was found within the resample budget."""


class MissingColumnError(SwbeamError):
    """A results table lacks a column that a consumer needs."""

    def __init__(self, column: str, *, context: str | None = None) -> None:
        self.column = column
        where = f" ({context})" if context else ""
        super().__init__(f"missing column {column!r}{where}")


class InvariantError(SwbeamError):
    """A simulation run broke one of its own guarantees."""
