"""Seed splitting.

Every random draw in swbeam comes from a generator built by :func:`derive_rng`.
The scheme is ``SeedSequence(seed, spawn_key=(stream, *indices))``: the user
seed is the entropy, the stream id names the component and the indices name
the work unit (replicate, sweep point, ...). Two components therefore never
share a stream, and a work unit draws the same numbers no matter which thread
runs it or in which order.
"""

from __future__ import annotations

from enum import IntEnum

import numpy as np

from .errors import InvalidParameterError


class Stream(IntEnum):
    TOPOLOGY = 1
    BEAMS = 2
    TRAFFIC = 3
    WARMUP = 4


def derive_rng(seed: int, stream: Stream, *indices: int) -> np.random.Generator:
    if seed < 0:
        raise InvalidParameterError(f"seed must be non-negative, got {seed}")
    if any(index < 0 for index in indices):
        raise InvalidParameterError(f"stream indices must be non-negative, got {indices}")
    sequence = np.random.SeedSequence(
        entropy=seed, spawn_key=(int(stream), *(int(i) for i in indices))
    )
    return np.random.default_rng(sequence)


def unit_seed(seed: int, stream: Stream, *indices: int) -> int:
    """Integer seed for a work unit, for components that take a plain seed."""
    return int(derive_rng(seed, stream, *indices).integers(0, 2**31 - 1))
