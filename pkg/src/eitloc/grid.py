"""Rectangular sampling grid and fields sampled on it (lengths in units of lambda)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatch, ValidationError


def _axis(lo: float, hi: float, n: int) -> np.ndarray:
    # Exactly mirror-symmetric about the midpoint, so symmetric extents give c[i] == -c[-1-i].
    u = np.linspace(-1.0, 1.0, n)
    u = 0.5 * (u - u[::-1])
    return 0.5 * (lo + hi) + 0.5 * (hi - lo) * u


@dataclass(frozen=True)
class Grid2D:
    x_min: float = -0.5
    x_max: float = 0.5
    y_min: float = -0.5
    y_max: float = 0.5
    nx: int = 257
    ny: int = 257

    def __post_init__(self):
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max) and self.x_max > self.x_min):
            raise ValidationError(f"x_max: need x_max > x_min, got [{self.x_min}, {self.x_max}]")
        if not (np.isfinite(self.y_min) and np.isfinite(self.y_max) and self.y_max > self.y_min):
            raise ValidationError(f"y_max: need y_max > y_min, got [{self.y_min}, {self.y_max}]")
        for name in ("nx", "ny"):
            n = getattr(self, name)
            if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 3 or n % 2 == 0:
                raise ValidationError(f"{name}: must be an odd integer >= 3, got {n!r}")

    @property
    def x(self) -> np.ndarray:
        return _axis(self.x_min, self.x_max, self.nx)

    @property
    def y(self) -> np.ndarray:
        return _axis(self.y_min, self.y_max, self.ny)

    @property
    def hx(self) -> float:
        return (self.x_max - self.x_min) / (self.nx - 1)

    @property
    def hy(self) -> float:
        return (self.y_max - self.y_min) / (self.ny - 1)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.ny, self.nx)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """(X, Y) arrays of shape (ny, nx)."""
        return np.meshgrid(self.x, self.y, indexing="xy")

    def as_dict(self) -> dict:
        return {
            "x_min": self.x_min, "x_max": self.x_max,
            "y_min": self.y_min, "y_max": self.y_max,
            "nx": int(self.nx), "ny": int(self.ny),
        }


@dataclass(frozen=True, eq=False)
class FieldMap:
    """Real or complex samples on a grid; ``values[j, i]`` sits at (x[i], y[j])."""

    grid: Grid2D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.shape != self.grid.shape:
            raise GridMismatch(f"values shape {values.shape} != grid shape {self.grid.shape}")
        if not np.all(np.isfinite(values)):
            raise ValidationError("field map contains NaN or Inf")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.values)

    def peak_abs(self) -> float:
        return float(np.max(np.abs(self.values)))


def require_same_grid(*maps: FieldMap) -> Grid2D:
    grid = maps[0].grid
    for m in maps[1:]:
        if m.grid != grid:
            raise GridMismatch(f"grids differ: {grid} vs {m.grid}")
    return grid
