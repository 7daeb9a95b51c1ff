"""Super-Gaussian control-beam envelopes."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import AxisMismatch, ValidationError
from .grid import FieldMap, Grid2D

# Selected by calibrate_waist over {0.1, 0.15, 0.2, 0.25, 0.3}; see README.
DEFAULT_WAIST = 0.1
DEFAULT_PEAK_RABI = 5.0


@dataclass(frozen=True)
class SuperGaussianBeam:
    """Omega(c) = peak_rabi * exp[-(c / waist)^(2 order)] along ``axis``."""

    peak_rabi: float = DEFAULT_PEAK_RABI
    waist: float = DEFAULT_WAIST
    order: int = 1
    axis: str = "x"

    def __post_init__(self):
        if not (np.isfinite(self.peak_rabi) and self.peak_rabi >= 0):
            raise ValidationError(f"peak_rabi: must be >= 0, got {self.peak_rabi!r}")
        if not (np.isfinite(self.waist) and self.waist > 0):
            raise ValidationError(f"waist: must be > 0, got {self.waist!r}")
        if isinstance(self.order, bool) or not isinstance(self.order, (int, np.integer)) or self.order < 1:
            raise ValidationError(f"order: must be an integer >= 1, got {self.order!r}")
        if self.axis not in ("x", "y"):
            raise ValidationError(f"axis: must be 'x' or 'y', got {self.axis!r}")

    def with_order(self, order: int) -> "SuperGaussianBeam":
        return replace(self, order=order)


def rabi_profile(beam: SuperGaussianBeam, coord):
    # Square first so the even power never sees a negative base.
    u = (np.asarray(coord, dtype=float) / beam.waist) ** 2
    out = beam.peak_rabi * np.exp(-(u ** beam.order))
    return out[()] if out.ndim == 0 else out


def control_field_maps(
    beam_x: SuperGaussianBeam, beam_y: SuperGaussianBeam, grid: Grid2D
) -> tuple[FieldMap, FieldMap]:
    """Sample Omega1(x) and Omega2(y) on the grid.

    The beams are matched to coordinates by their ``axis``, so a swapped pair is
    accepted; two beams on the same axis are not.
    """
    if beam_x.axis == beam_y.axis:
        raise AxisMismatch(f"both beams modulate '{beam_x.axis}'")
    if beam_x.axis == "y":
        beam_x, beam_y = beam_y, beam_x
    ny, nx = grid.shape
    omega1 = np.broadcast_to(rabi_profile(beam_x, grid.x)[None, :], (ny, nx))
    omega2 = np.broadcast_to(rabi_profile(beam_y, grid.y)[:, None], (ny, nx))
    return FieldMap(grid, omega1), FieldMap(grid, omega2)
