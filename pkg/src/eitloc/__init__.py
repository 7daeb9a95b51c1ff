"""Position-dependent tripod-EIT susceptibility maps and localization metrics."""

__version__ = "0.1.0"

from .atomic import (
    AtomicParams,
    Detunings,
    coherence_general,
    coherence_simplified,
    decay_params,
    eit_linewidth,
    lorentzian_dispersion,
    susceptibility,
)
from .beams import SuperGaussianBeam, control_field_maps, rabi_profile
from .grid import FieldMap, Grid2D
from .metrics import (
    ChannelResult,
    ComparisonRow,
    build_comparison_row,
    fwhm_cross_section,
    gradient_map,
    max_gradient,
)
from .response import (
    NormalizedSignal,
    SensingChannel,
    channel_signal,
    normalize_with_guard,
    susceptibility_map,
)
from .scenarios import (
    ScanResult,
    ScenarioConfig,
    ScenarioKind,
    calibrate_waist,
    detuning_scan,
    run_scenario,
)

__all__ = [
    "AtomicParams", "Detunings", "coherence_general", "coherence_simplified",
    "decay_params", "eit_linewidth", "lorentzian_dispersion", "susceptibility",
    "SuperGaussianBeam", "control_field_maps", "rabi_profile",
    "FieldMap", "Grid2D",
    "ChannelResult", "ComparisonRow", "build_comparison_row",
    "fwhm_cross_section", "gradient_map", "max_gradient",
    "NormalizedSignal", "SensingChannel", "channel_signal",
    "normalize_with_guard", "susceptibility_map",
    "ScanResult", "ScenarioConfig", "ScenarioKind",
    "calibrate_waist", "detuning_scan", "run_scenario",
]
