"""Spatial-gradient and FWHM metrics for normalized channel signals."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InactiveChannel, NoHalfCrossing, ValidationError
from .grid import FieldMap
from .response import NormalizedSignal, SensingChannel


@dataclass(frozen=True)
class ChannelResult:
    """Metrics for one channel at one detuning.

    ``None`` marks an undefined metric.  Inactive channels have both metrics
    undefined; an active channel may still lack a FWHM when its cross-section
    never falls to half maximum, and ``note`` then says why.
    """

    channel: SensingChannel
    detuning: float
    max_gradient: Optional[float]
    fwhm: Optional[float]
    active: bool
    raw_peak: float = 0.0
    note: Optional[str] = None

    def __post_init__(self):
        if not self.active and (self.max_gradient is not None or self.fwhm is not None):
            raise ValidationError("inactive channel cannot carry metrics")
        if self.max_gradient is not None and self.max_gradient < 0:
            raise ValidationError("max_gradient must be >= 0")
        if self.fwhm is not None and self.fwhm <= 0:
            raise ValidationError("fwhm must be > 0")


@dataclass(frozen=True)
class ComparisonRow:
    order: int
    abs_result: ChannelResult
    eit_result: ChannelResult
    gradient_ratio: Optional[float]
    fwhm_ratio: Optional[float]

    @property
    def notes(self) -> list[str]:
        return [r.note for r in (self.abs_result, self.eit_result) if r.note]


def _derivative(f: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Second-order central differences, one-sided second order at both ends.

    The end stencils are written in difference form so a constant input gives
    exactly zero.
    """
    f = np.moveaxis(f, axis, 0)
    out = np.empty_like(f)
    out[1:-1] = (f[2:] - f[:-2]) / (2 * h)
    out[0] = (4 * (f[1] - f[0]) - (f[2] - f[0])) / (2 * h)
    out[-1] = ((f[-3] - f[-1]) - 4 * (f[-2] - f[-1])) / (2 * h)
    return np.moveaxis(out, 0, axis)


def gradient_map(signal: NormalizedSignal) -> FieldMap:
    """Pointwise |grad s| of an active normalized signal, in 1/lambda."""
    if not signal.active:
        raise InactiveChannel("gradient of an inactive channel is undefined")
    grid = signal.grid
    d_dx = _derivative(signal.values, grid.hx, axis=1)
    d_dy = _derivative(signal.values, grid.hy, axis=0)
    return FieldMap(grid, np.hypot(d_dx, d_dy))


def max_gradient(grad_map: FieldMap) -> float:
    return float(np.max(grad_map.values))


def _half_crossing(x0, x1, p0, p1, half):
    return x0 + (half - p0) * (x1 - x0) / (p1 - p0)


def fwhm_cross_section(signal: NormalizedSignal, axis: str = "x") -> float:
    """Width of the central cut of |signal| at half its maximum.

    The cut runs along ``axis`` through the middle row (or column).  The width
    spans the two outermost half-maximum crossings, each located by linear
    interpolation between neighbouring samples.
    """
    if not signal.active:
        raise InactiveChannel("FWHM of an inactive channel is undefined")
    grid = signal.grid
    values = np.abs(signal.values)
    if axis == "x":
        coords, profile = grid.x, values[grid.ny // 2, :]
    elif axis == "y":
        coords, profile = grid.y, values[:, grid.nx // 2]
    else:
        raise ValidationError(f"axis: must be 'x' or 'y', got {axis!r}")

    half = 0.5 * float(np.max(profile))
    above = np.flatnonzero(profile >= half)
    first, last = above[0], above[-1]
    if first == 0 or last == profile.size - 1:
        raise NoHalfCrossing(
            f"central {axis}-cut does not fall to half maximum on both sides "
            "inside the grid"
        )
    left = _half_crossing(coords[first - 1], coords[first], profile[first - 1], profile[first], half)
    right = _half_crossing(coords[last], coords[last + 1], profile[last], profile[last + 1], half)
    return float(right - left)


def build_comparison_row(order: int, abs_result: ChannelResult, eit_result: ChannelResult) -> ComparisonRow:
    gradient_ratio = None
    if abs_result.max_gradient is not None and eit_result.max_gradient is not None:
        if abs_result.max_gradient > 0:
            gradient_ratio = eit_result.max_gradient / abs_result.max_gradient
    fwhm_ratio = None
    if abs_result.fwhm is not None and eit_result.fwhm is not None:
        fwhm_ratio = abs_result.fwhm / eit_result.fwhm
    return ComparisonRow(order, abs_result, eit_result, gradient_ratio, fwhm_ratio)
