"""Susceptibility maps, sensing-channel extraction and guarded normalization."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .atomic import AtomicParams, coherence_simplified, susceptibility
from .errors import ValidationError
from .grid import FieldMap, require_same_grid

# Activity threshold, relative to the absorption peak of the same chi map.
DEFAULT_EPSILON_ACTIVE = 1e-9


class SensingChannel(enum.Enum):
    ABSORPTION = "abs"
    DISPERSION = "eit"

    @classmethod
    def parse(cls, name: str) -> "SensingChannel":
        key = name.strip().lower()
        aliases = {"abs": cls.ABSORPTION, "absorption": cls.ABSORPTION,
                   "eit": cls.DISPERSION, "dispersion": cls.DISPERSION}
        try:
            return aliases[key]
        except KeyError:
            raise ValidationError(f"channel: expected abs or eit, got {name!r}") from None

    def extract(self, chi):
        if self is SensingChannel.ABSORPTION:
            return -np.imag(chi)
        return np.real(chi)


@dataclass(frozen=True, eq=False)
class NormalizedSignal:
    """A channel map scaled to unit peak, or left raw and flagged inactive."""

    map: FieldMap
    raw_peak: float
    active: bool

    @property
    def grid(self):
        return self.map.grid

    @property
    def values(self) -> np.ndarray:
        return self.map.values


def susceptibility_map(
    params: AtomicParams,
    gamma: float,
    delta_p: float,
    omega1_map: FieldMap,
    omega2_map: FieldMap,
) -> FieldMap:
    grid = require_same_grid(omega1_map, omega2_map)
    rho = coherence_simplified(
        gamma, delta_p, omega1_map.values, omega2_map.values, params.probe_rabi
    )
    return FieldMap(grid, susceptibility(params, rho))


def channel_signal(chi_map: FieldMap, channel: SensingChannel) -> FieldMap:
    return FieldMap(chi_map.grid, channel.extract(chi_map.values))


def normalize_with_guard(signal: FieldMap, epsilon_active: float) -> NormalizedSignal:
    """Divide by max|signal| only when that peak reaches ``epsilon_active``.

    Below the threshold the raw map is returned with ``active=False`` so that no
    division by a vanishing peak ever happens.
    """
    if not epsilon_active > 0:
        raise ValidationError(f"epsilon_active: must be > 0, got {epsilon_active!r}")
    if signal.is_complex:
        raise ValidationError("normalize_with_guard expects a real channel signal")
    peak = signal.peak_abs()
    if peak >= epsilon_active:
        return NormalizedSignal(FieldMap(signal.grid, signal.values / peak), peak, True)
    return NormalizedSignal(signal, peak, False)
