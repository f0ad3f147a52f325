from __future__ import annotations

import math
from typing import Literal

type NodeId = int
type Point = tuple[float, float]

AntennaModel = Literal["sector", "ula"]

TWO_PI = 2.0 * math.pi


def normalize_angle(angle: float) -> float:
    """Map an angle in radians onto [0, 2π)."""
    wrapped = math.fmod(angle, TWO_PI)
    if wrapped < 0.0:
        wrapped += TWO_PI
    # fmod of a tiny negative number can round up to exactly 2π
    return 0.0 if wrapped >= TWO_PI else wrapped


def distance(a: Point, b: Point) -> float:
    return math.hypot(b[0] - a[0], b[1] - a[1])


def bearing(origin: Point, target: Point) -> float:
    """Direction from ``origin`` to ``target`` in [0, 2π); 0 for coincident points."""
    dx = target[0] - origin[0]
    dy = target[1] - origin[1]
    if dx == 0.0 and dy == 0.0:
        return 0.0
    return normalize_angle(math.atan2(dy, dx))
