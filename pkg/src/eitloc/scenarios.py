"""
Absorption-versus-dispersion comparison protocols.

Three protocols differ only in the probe detuning handed to each channel:

==========  ===========  ===========
kind        absorption   dispersion
==========  ===========  ===========
same        0.5          0.5
optimal     0.0          0.5
switched    0.5          0.0
==========  ===========  ===========
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .atomic import AtomicParams
from .beams import SuperGaussianBeam, control_field_maps
from .errors import AllInactive, EitlocError, ValidationError
from .grid import Grid2D
from .metrics import (
    ChannelResult,
    ComparisonRow,
    build_comparison_row,
    fwhm_cross_section,
    gradient_map,
    max_gradient,
)
from .response import (
    DEFAULT_EPSILON_ACTIVE,
    NormalizedSignal,
    SensingChannel,
    channel_signal,
    normalize_with_guard,
    susceptibility_map,
)

DEFAULT_ORDERS = (1, 2, 3, 10)
CALIBRATION_CANDIDATES = (0.1, 0.15, 0.2, 0.25, 0.3)


class ScenarioKind(enum.Enum):
    SAME = "same"
    OPTIMAL = "optimal"
    SWITCHED = "switched"

    @classmethod
    def parse(cls, name: str) -> "ScenarioKind":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValidationError(
                f"scenario: expected one of same|optimal|switched, got {name!r}"
            ) from None


# (absorption detuning, dispersion detuning) in units of gamma
DEFAULT_DETUNINGS = {
    ScenarioKind.SAME: (0.5, 0.5),
    ScenarioKind.OPTIMAL: (0.0, 0.5),
    ScenarioKind.SWITCHED: (0.5, 0.0),
}

# Published max gradients (abs, eit) and ratios per order, used as calibration targets.
REFERENCE_SAME_DETUNING = {
    1: (67.54, 158.89, 2.35, 2.53),
    2: (142.65, 329.27, 2.31, 3.03),
    3: (193.63, 427.96, 2.21, 3.17),
    10: (249.37, 396.03, 1.59, 3.45),
}
REFERENCE_OPTIMAL_DETUNING = {
    1: (13.406, 158.895, 11.85, 1.34),
    2: (36.860, 329.267, 8.93, 1.17),
    3: (60.956, 427.963, 7.02, 1.10),
    10: (193.239, 396.027, 2.05, 1.03),
}


@dataclass(frozen=True)
class ScenarioConfig:
    kind: ScenarioKind = ScenarioKind.SAME
    abs_detuning: float = 0.5
    eit_detuning: float = 0.5
    orders: tuple[int, ...] = DEFAULT_ORDERS
    atomic: AtomicParams = field(default_factory=AtomicParams)
    gamma: float = 1.0
    beam_x: SuperGaussianBeam = field(default_factory=lambda: SuperGaussianBeam(axis="x"))
    beam_y: SuperGaussianBeam = field(default_factory=lambda: SuperGaussianBeam(axis="y"))
    grid: Grid2D = field(default_factory=Grid2D)
    epsilon_active: float = DEFAULT_EPSILON_ACTIVE

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(self.orders))
        for p in self.orders:
            if isinstance(p, bool) or not isinstance(p, (int, np.integer)) or p < 1:
                raise ValidationError(f"orders: each order must be an integer >= 1, got {p!r}")
        if not (np.isfinite(self.abs_detuning) and np.isfinite(self.eit_detuning)):
            raise ValidationError("detunings must be finite")
        if self.kind is ScenarioKind.SAME and self.abs_detuning != self.eit_detuning:
            raise ValidationError(
                "eit_detuning: same-detuning scenario needs abs_detuning == eit_detuning"
            )
        if not (np.isfinite(self.gamma) and self.gamma > 0):
            raise ValidationError(f"gamma: must be > 0, got {self.gamma!r}")
        if not self.epsilon_active > 0:
            raise ValidationError(f"epsilon_active: must be > 0, got {self.epsilon_active!r}")

    @classmethod
    def for_kind(cls, kind: ScenarioKind | str, **overrides) -> "ScenarioConfig":
        if isinstance(kind, str):
            kind = ScenarioKind.parse(kind)
        abs_det, eit_det = DEFAULT_DETUNINGS[kind]
        overrides.setdefault("abs_detuning", abs_det)
        overrides.setdefault("eit_detuning", eit_det)
        return cls(kind=kind, **overrides)

    def detuning_for(self, channel: SensingChannel) -> float:
        if channel is SensingChannel.ABSORPTION:
            return self.abs_detuning
        return self.eit_detuning

    def with_waist(self, waist: float) -> "ScenarioConfig":
        return replace(
            self,
            beam_x=replace(self.beam_x, waist=waist),
            beam_y=replace(self.beam_y, waist=waist),
        )

    def as_dict(self) -> dict:
        def beam(b):
            return {"peak_rabi": b.peak_rabi, "waist": b.waist}

        a = self.atomic
        return {
            "scenario": self.kind.value,
            "abs_detuning": self.abs_detuning,
            "eit_detuning": self.eit_detuning,
            "orders": [int(p) for p in self.orders],
            "gamma": self.gamma,
            "epsilon_active": self.epsilon_active,
            "atomic": {
                "gamma14": a.gamma14, "gamma24": a.gamma24, "gamma34": a.gamma34,
                "probe_rabi": a.probe_rabi, "prefactor": a.prefactor,
            },
            "beam_x": beam(self.beam_x),
            "beam_y": beam(self.beam_y),
            "grid": self.grid.as_dict(),
        }


def channel_map(
    config: ScenarioConfig, order: int, channel: SensingChannel, detuning: float
) -> NormalizedSignal:
    """Guard-normalized channel signal for one beam order and detuning.

    The activity threshold is ``epsilon_active`` times the absorption peak of
    the same susceptibility map.
    """
    omega1, omega2 = control_field_maps(
        config.beam_x.with_order(order), config.beam_y.with_order(order), config.grid
    )
    chi = susceptibility_map(config.atomic, config.gamma, detuning, omega1, omega2)
    reference = channel_signal(chi, SensingChannel.ABSORPTION).peak_abs()
    return normalize_with_guard(
        channel_signal(chi, channel), config.epsilon_active * reference
    )


def evaluate_channel(
    config: ScenarioConfig, order: int, channel: SensingChannel, detuning: float
) -> ChannelResult:
    signal = channel_map(config, order, channel, detuning)
    if not signal.active:
        return ChannelResult(
            channel, detuning, None, None, False, signal.raw_peak,
            note=f"{channel.value}: inactive (raw_peak={signal.raw_peak:.3g})",
        )
    grad = max_gradient(gradient_map(signal))
    try:
        width, note = fwhm_cross_section(signal, "x"), None
    except EitlocError as exc:
        width, note = None, f"{channel.value}: fwhm undefined ({exc})"
    return ChannelResult(channel, detuning, grad, width, True, signal.raw_peak, note)


def run_row(config: ScenarioConfig, order: int) -> ComparisonRow:
    abs_result = evaluate_channel(config, order, SensingChannel.ABSORPTION, config.abs_detuning)
    eit_result = evaluate_channel(config, order, SensingChannel.DISPERSION, config.eit_detuning)
    return build_comparison_row(order, abs_result, eit_result)


def _failed_row(config: ScenarioConfig, order: int, exc: Exception) -> ComparisonRow:
    note = f"row failed: {type(exc).__name__}: {exc}"
    abs_result = ChannelResult(SensingChannel.ABSORPTION, config.abs_detuning, None, None, False, note=note)
    eit_result = ChannelResult(SensingChannel.DISPERSION, config.eit_detuning, None, None, False)
    return ComparisonRow(order, abs_result, eit_result, None, None)


def run_scenario(config: ScenarioConfig) -> list[ComparisonRow]:
    """One comparison row per order, ascending in order.

    A row that raises is replaced by an all-undefined row carrying the error
    message; the remaining orders still run.
    """
    rows = []
    for order in sorted(config.orders):
        try:
            rows.append(run_row(config, order))
        except EitlocError as exc:
            rows.append(_failed_row(config, order, exc))
    return rows


@dataclass(frozen=True)
class ScanResult:
    channel: SensingChannel
    order: int
    detunings: tuple[float, ...]
    metric_values: tuple[Optional[float], ...]
    best_detuning: Optional[float]


def detuning_scan(
    config: ScenarioConfig,
    channel: SensingChannel,
    range_min: float,
    range_max: float,
    steps: int,
    order: Optional[int] = None,
) -> ScanResult:
    """Max gradient of ``channel`` over evenly spaced probe detunings.

    ``order`` defaults to the first order in the config.  Ties for the best
    detuning (within 1e-12 relative) go to the most positive detuning.
    """
    if isinstance(steps, bool) or not isinstance(steps, (int, np.integer)) or steps < 3:
        raise ValidationError(f"steps: must be an integer >= 3, got {steps!r}")
    if not range_min < range_max:
        raise ValidationError(f"range: need min < max, got [{range_min}, {range_max}]")
    if order is None:
        if not config.orders:
            raise ValidationError("orders: empty, pass order explicitly")
        order = config.orders[0]

    detunings = np.linspace(range_min, range_max, steps)
    # linspace through zero can land on ~1e-17 instead of 0.0
    detunings[np.abs(detunings) < 1e-12 * (range_max - range_min)] = 0.0

    values = []
    for d in detunings:
        result = evaluate_channel(config, order, channel, float(d))
        values.append(result.max_gradient)

    defined = [(v, d) for v, d in zip(values, detunings) if v is not None]
    if not defined:
        raise AllInactive(f"{channel.value}: inactive at every scanned detuning")
    top = max(v for v, _ in defined)
    best = max(d for v, d in defined if v >= top * (1 - 1e-12))
    return ScanResult(
        channel, int(order), tuple(float(d) for d in detunings), tuple(values), float(best)
    )


def reference_rows(table: dict = REFERENCE_SAME_DETUNING) -> list[ComparisonRow]:
    """Published table entries wrapped as comparison rows."""
    rows = []
    for order, (g_abs, g_eit, ratio, fwhm_ratio) in sorted(table.items()):
        abs_r = ChannelResult(SensingChannel.ABSORPTION, 0.5, g_abs, None, True)
        eit_r = ChannelResult(SensingChannel.DISPERSION, 0.5, g_eit, None, True)
        rows.append(ComparisonRow(order, abs_r, eit_r, ratio, fwhm_ratio))
    return rows


def calibration_errors(
    target_rows: Sequence[ComparisonRow],
    waist_candidates: Sequence[float],
    base: Optional[ScenarioConfig] = None,
) -> list[tuple[float, float, list[Optional[float]]]]:
    """(waist, summed squared relative error, achieved ratios) per candidate."""
    if base is None:
        base = ScenarioConfig.for_kind(ScenarioKind.SAME)
    targets = {row.order: row.gradient_ratio for row in target_rows}
    base = replace(base, orders=tuple(sorted(targets)))
    out = []
    for waist in waist_candidates:
        if not waist > 0:
            raise ValidationError(f"waist candidates must be > 0, got {waist!r}")
        rows = run_scenario(base.with_waist(waist))
        ratios = [row.gradient_ratio for row in rows]
        if any(r is None for r in ratios):
            err = float("inf")
        else:
            err = float(sum((r / targets[row.order] - 1) ** 2 for r, row in zip(ratios, rows)))
        out.append((float(waist), err, ratios))
    return out


def calibrate_waist(
    target_rows: Sequence[ComparisonRow],
    waist_candidates: Sequence[float] = CALIBRATION_CANDIDATES,
    base: Optional[ScenarioConfig] = None,
) -> float:
    """Candidate waist whose same-detuning gradient ratios best match the targets.

    The first candidate wins ties.
    """
    if not waist_candidates:
        raise ValidationError("waist_candidates: empty")
    if len(waist_candidates) == 1:
        return float(waist_candidates[0])
    table = calibration_errors(target_rows, waist_candidates, base)
    return min(table, key=lambda t: t[1])[0]
