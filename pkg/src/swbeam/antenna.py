"""Beam geometry.

Covers the sector abstraction (equal-area beams, region weighting and the
choice of beam width) and the uniform linear array pattern used as the
realistic counterpart, plus the mapping between the two.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, overload

import numpy as np
import pandas as pd

from .errors import InvalidParameterError
from .types import TWO_PI, Point, bearing, distance, normalize_angle

UlaReachMode = Literal["path_loss", "calibrated"]

DEFAULT_PATH_LOSS_EXPONENT = 2.0
# sin(ψ/2) below this is treated as the ψ → 0 limit of the array factor
_GAIN_LIMIT_EPS = 1e-12


@dataclass(frozen=True, slots=True)
class Omni:
    range: float

    def __post_init__(self) -> None:
        if not self.range > 0:
            raise InvalidParameterError(f"omni range must be positive, got {self.range}")


@dataclass(frozen=True, slots=True)
class Sector:
    """Circular sector of angle ``width`` and radius ``length`` centred on ``orientation``."""

    width: float
    length: float
    orientation: float = 0.0

    def __post_init__(self) -> None:
        _check_theta(self.width)
        if not self.length > 0:
            raise InvalidParameterError(f"beam length must be positive, got {self.length}")
        object.__setattr__(self, "orientation", normalize_angle(self.orientation))


@dataclass(frozen=True, slots=True)
class Ula:
    """Uniform linear array with ``elements`` half-wavelength spaced elements.

    ``peak_reach`` selects the calibrated reading of the sector mapping: when
    set, the main lobe reaches exactly that far. When ``None`` the reach
    follows the path-loss law ``r * G ** (1 / alpha)``.
    """

    elements: int
    boresight: float = 0.0
    path_loss_exponent: float = DEFAULT_PATH_LOSS_EXPONENT
    peak_reach: float | None = None

    def __post_init__(self) -> None:
        if self.elements < 1:
            raise InvalidParameterError(
                f"a ULA needs at least one element, got {self.elements}"
            )
        if not self.path_loss_exponent > 0:
            raise InvalidParameterError(
                f"path loss exponent must be positive, got {self.path_loss_exponent}"
            )
        if self.peak_reach is not None and not self.peak_reach > 0:
            raise InvalidParameterError(
                f"peak reach must be positive, got {self.peak_reach}"
            )
        object.__setattr__(self, "boresight", normalize_angle(self.boresight))


type AntennaConfig = Omni | Sector | Ula


@dataclass(frozen=True, slots=True)
class RegionWeights:
    """Areas of the first and last radial bands of a sector and the
    probabilities that each holds at least one node."""

    first_area: float
    last_area: float
    p_first: float
    p_last: float


def _check_theta(theta: float) -> None:
    if not 0.0 < theta <= TWO_PI:
        raise InvalidParameterError(f"beam width must lie in (0, 2π], got {theta}")


def _check_range(r: float) -> None:
    if not r > 0:
        raise InvalidParameterError(f"omni range must be positive, got {r}")


def default_theta_grid() -> tuple[float, ...]:
    """Beam widths 2π/k² for k = 1..8, i.e. beams exactly k ranges long."""
    return tuple(TWO_PI / (k * k) for k in range(1, 9))


def sector_beam_length(theta: float, r: float) -> float:
    """Radius of a sector of width ``theta`` with the area of the omni disc."""
    _check_theta(theta)
    _check_range(r)
    return r * math.sqrt(TWO_PI / theta)


def region_weights(theta: float, r: float, n: float) -> RegionWeights:
    """Split the sector into bands of depth ``r`` and weigh the first and last.

    ``n`` is the omni neighbourhood size and may be fractional (a network mean).
    When the beam is shorter than two ranges the last band overlaps the first;
    its depth is then ``min(r, r(θ))``.
    """
    if n < 0:
        raise InvalidParameterError(f"neighbourhood size must be non-negative, got {n}")
    length = sector_beam_length(theta, r)
    disc = math.pi * r * r
    first_area = 0.5 * theta * r * r
    inner = max(length - r, 0.0)
    last_area = min(0.5 * theta * (length * length - inner * inner), disc)
    first_area = min(first_area, disc)
    return RegionWeights(
        first_area=first_area,
        last_area=last_area,
        p_first=_occupancy(first_area / disc, n),
        p_last=_occupancy(last_area / disc, n),
    )


def _occupancy(fraction: float, n: float) -> float:
    """Probability that at least one of ``n`` uniform neighbours falls in ``fraction``."""
    if n == 0:
        return 0.0
    return 1.0 - (1.0 - fraction) ** n


def weighted_beam_length(theta: float, r: float, n: float) -> float:
    """Beam length discounted by the chance its first and last bands are populated."""
    weights = region_weights(theta, r, n)
    return sector_beam_length(theta, r) * weights.p_first * weights.p_last


def optimal_beamwidth(candidates: Iterable[float], r: float, n: float) -> float:
    """Candidate width maximising :func:`weighted_beam_length`.

    Ties go to the narrower beam.
    """
    ordered = sorted(candidates)
    if not ordered:
        raise InvalidParameterError("optimal_beamwidth needs at least one candidate")
    best_theta = ordered[0]
    best_value = weighted_beam_length(best_theta, r, n)
    for theta in ordered[1:]:
        value = weighted_beam_length(theta, r, n)
        if value > best_value:
            best_theta, best_value = theta, value
    return best_theta


def sector_mask(
    dx: np.ndarray,
    dy: np.ndarray,
    orientation: float,
    theta: float,
    length: float,
) -> np.ndarray:
    """Which offsets ``(dx, dy)`` from the beam origin fall inside the sector.

    Closed in distance and angle; a zero offset is always covered.
    """
    dist = np.hypot(dx, dy)
    diff = np.mod(np.arctan2(dy, dx) - orientation, TWO_PI)
    diff = np.minimum(diff, TWO_PI - diff)
    return (dist <= length) & ((diff <= 0.5 * theta) | (dist == 0.0))


def sector_covers(
    origin: Point,
    orientation: float,
    theta: float,
    length: float,
    target: Point,
) -> bool:
    """Whether ``target`` lies inside the sector (closed in distance and angle)."""
    dx = np.array([target[0] - origin[0]], dtype=np.float64)
    dy = np.array([target[1] - origin[1]], dtype=np.float64)
    return bool(sector_mask(dx, dy, orientation, theta, length)[0])


@overload
def ula_gain(m: int, boresight: float, phi: float) -> float: ...
@overload
def ula_gain(m: int, boresight: float, phi: np.ndarray) -> np.ndarray: ...
def ula_gain(m: int, boresight: float, phi: float | np.ndarray) -> float | np.ndarray:
    """Normalised power gain of an ``m`` element array steered to ``boresight``.

    G(φ) = sin²(mψ/2) / (m sin²(ψ/2)) with ψ = π(cos φ − cos θ_b), which peaks
    at ``m``. The array axis makes the pattern symmetric about it, so the
    mirror direction of the boresight gets the same main lobe.
    """
    if m < 1:
        raise InvalidParameterError(f"a ULA needs at least one element, got {m}")
    scalar = np.ndim(phi) == 0
    phis = np.asarray(phi, dtype=np.float64)
    half_psi = 0.5 * math.pi * (np.cos(phis) - math.cos(boresight))
    denom = np.sin(half_psi)
    numer = np.sin(m * half_psi)
    at_limit = np.abs(denom) < _GAIN_LIMIT_EPS
    with np.errstate(divide="ignore", invalid="ignore"):
        gain = np.where(at_limit, float(m), numer * numer / (m * denom * denom))
    if m == 1:
        gain = np.ones_like(phis)
    if scalar:
        return float(gain)
    return gain


@overload
def ula_reach(
    m: int, boresight: float, phi: float, r: float, alpha: float = ...
) -> float: ...
@overload
def ula_reach(
    m: int, boresight: float, phi: np.ndarray, r: float, alpha: float = ...
) -> np.ndarray: ...
def ula_reach(
    m: int,
    boresight: float,
    phi: float | np.ndarray,
    r: float,
    alpha: float = DEFAULT_PATH_LOSS_EXPONENT,
) -> float | np.ndarray:
    """Range reached in direction ``phi`` under the path-loss law r·G^(1/α)."""
    if not alpha > 0:
        raise InvalidParameterError(f"path loss exponent must be positive, got {alpha}")
    _check_range(r)
    return r * ula_gain(m, boresight, phi) ** (1.0 / alpha)


def calibrated_ula_reach(
    m: int,
    boresight: float,
    phi: float | np.ndarray,
    peak_reach: float,
    alpha: float = DEFAULT_PATH_LOSS_EXPONENT,
) -> float | np.ndarray:
    """Reach rescaled so the main lobe extends exactly ``peak_reach``."""
    if not alpha > 0:
        raise InvalidParameterError(f"path loss exponent must be positive, got {alpha}")
    return peak_reach * (ula_gain(m, boresight, phi) / m) ** (1.0 / alpha)


def config_reach(config: Ula, phi: float | np.ndarray, r: float) -> float | np.ndarray:
    """Reach of a ULA config towards ``phi``; a single element is an omni radio of range ``r``."""
    if config.elements == 1:
        return r if np.ndim(phi) == 0 else np.full(np.shape(phi), r)
    if config.peak_reach is None:
        return ula_reach(
            config.elements, config.boresight, phi, r, config.path_loss_exponent
        )
    return calibrated_ula_reach(
        config.elements,
        config.boresight,
        phi,
        config.peak_reach,
        config.path_loss_exponent,
    )


def map_sector_to_ula(r_theta_star: float, r: float) -> int:
    """Element count whose gain matches the normalised sector beam length."""
    _check_range(r)
    if r_theta_star < r:
        raise InvalidParameterError(
            f"sector beam length {r_theta_star} is shorter than the omni range {r}"
        )
    return max(1, math.floor(r_theta_star / r + 0.5))


def make_ula(
    r_theta_star: float,
    r: float,
    boresight: float,
    *,
    alpha: float = DEFAULT_PATH_LOSS_EXPONENT,
    mode: UlaReachMode = "path_loss",
) -> Ula:
    """ULA config standing in for a sector beam of length ``r_theta_star``."""
    return Ula(
        elements=map_sector_to_ula(r_theta_star, r),
        boresight=boresight,
        path_loss_exponent=alpha,
        peak_reach=r_theta_star if mode == "calibrated" else None,
    )


def transmit_covers(config: AntennaConfig, origin: Point, target: Point, r: float) -> bool:
    """Whether a transmission from ``origin`` with ``config`` reaches ``target``."""
    match config:
        case Omni(range=omni_range):
            return distance(origin, target) <= omni_range
        case Sector(width=width, length=length, orientation=orientation):
            return sector_covers(origin, orientation, width, length, target)
        case Ula():
            if target == origin:
                return True
            reach = config_reach(config, bearing(origin, target), r)
            return distance(origin, target) <= float(reach)
    raise TypeError(f"unknown antenna config {config!r}")


def gain_pattern(m: int, boresight: float, points: int = 3600) -> pd.DataFrame:
    phis = np.linspace(0.0, TWO_PI, points, endpoint=False)
    return pd.DataFrame({"phi": phis, "gain": ula_gain(m, boresight, phis)})


def export_gain_pattern(
    path: Path, m: int, boresight: float, points: int = 3600
) -> None:
    """Write ``phi,gain`` samples over [0, 2π) for plotting."""
    path.parent.mkdir(parents=True, exist_ok=True)
    gain_pattern(m, boresight, points).to_csv(
        path, index=False, float_format="%.17g", lineterminator="\n"
    )


def theta_grid_from(values: Sequence[float] | None) -> tuple[float, ...]:
    if not values:
        return default_theta_grid()
    for theta in values:
        _check_theta(theta)
    return tuple(values)
