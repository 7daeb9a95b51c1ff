"""
Steady-state probe response of a four-level tripod atom.

Ground states |1>, |2>, |3> couple to the excited state |4>; the probe drives
|2> <-> |4> and two control fields drive |1> <-> |4> and |3> <-> |4>.  All rates
and detunings are in units of the reference decay rate gamma, so gamma = 1.

Every function accepts scalars or numpy arrays and broadcasts.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDenominator, ValidationError

# |A1 A2 A3 + ...| at or below this is treated as degenerate (gamma^3 units).
EPS_DENOMINATOR = 1e-12

# Probe counts as weak while it stays below this fraction of the weakest control peak.
WEAK_PROBE_FRACTION = 0.1


class WeakProbeWarning(UserWarning):
    pass


def _require_finite(name, value):
    if not math.isfinite(value):
        raise ValidationError(f"{name}: must be finite, got {value!r}")


@dataclass(frozen=True)
class AtomicParams:
    """Decay rates, probe strength and susceptibility prefactor.

    ``prefactor`` stands in for 2 N |d24|^2 / (eps0 hbar); the default 1.0 gives
    the normalized susceptibility.
    """

    gamma14: float = 1.0
    gamma24: float = 1.0
    gamma34: float = 1.0
    probe_rabi: float = 0.1
    prefactor: float = 1.0

    def __post_init__(self):
        for name in ("gamma14", "gamma24", "gamma34", "probe_rabi", "prefactor"):
            value = getattr(self, name)
            _require_finite(name, value)
            if value <= 0:
                raise ValidationError(f"{name}: must be > 0, got {value!r}")

    def weak_probe_valid(self, control_peaks) -> bool:
        """True while probe_rabi <= 0.1 * min(control_peaks)."""
        return self.probe_rabi <= WEAK_PROBE_FRACTION * min(control_peaks)


@dataclass(frozen=True)
class Detunings:
    delta1: float = 0.0
    delta2: float = 0.0
    delta3: float = 0.0

    def __post_init__(self):
        for name in ("delta1", "delta2", "delta3"):
            _require_finite(name, getattr(self, name))


def check_weak_probe(params: AtomicParams, control_peaks) -> bool:
    """Warn (never raise) when the weak-probe regime is left."""
    ok = params.weak_probe_valid(control_peaks)
    if not ok:
        warnings.warn(
            f"probe_rabi={params.probe_rabi} exceeds {WEAK_PROBE_FRACTION} x "
            f"min control peak {min(control_peaks)}; weak-probe regime left",
            WeakProbeWarning,
            stacklevel=2,
        )
    return ok


def decay_params(params: AtomicParams, det: Detunings) -> tuple[complex, complex, complex]:
    """A_j = Gamma_j4 + i Delta_j."""
    return (
        complex(params.gamma14, det.delta1),
        complex(params.gamma24, det.delta2),
        complex(params.gamma34, det.delta3),
    )


def coherence_general(params: AtomicParams, det: Detunings, omega1, omega2):
    """Probe coherence rho_24 with independent detunings on all three arms.

        rho_24 = -i A2 A3 Omega_p / [2 (A1 A2 A3 + A3 |Omega1|^2/4 + A2 |Omega2|^2/4)]
    """
    a1, a2, a3 = decay_params(params, det)
    o1sq = np.abs(omega1) ** 2
    o2sq = np.abs(omega2) ** 2
    denom = a1 * a2 * a3 + a3 * o1sq / 4 + a2 * o2sq / 4
    if np.any(np.abs(denom) <= EPS_DENOMINATOR):
        raise DegenerateDenominator(
            f"|A1 A2 A3 + A3|O1|^2/4 + A2|O2|^2/4| <= {EPS_DENOMINATOR}"
        )
    return -1j * a2 * a3 * params.probe_rabi / (2 * denom)


def coherence_simplified(gamma, delta_p, omega1, omega2, omega_p):
    """rho_24 for resonant control fields and equal decay rates Gamma.

    This is the closed form obtained with A1 = A3 = Gamma, A2 = Gamma + i Delta_p;
    it carries Gamma (not A2) on the |Omega2|^2 term, so it differs from
    :func:`coherence_general` by i Delta_p |Omega2|^2 / 4 in the denominator.
    At Delta_p = 0 the result is purely imaginary.
    """
    if not gamma > 0:
        raise ValidationError(f"gamma: must be > 0, got {gamma!r}")
    sq = np.abs(omega1) ** 2 + np.abs(omega2) ** 2
    num = -1j * (gamma + 1j * delta_p) * gamma * (omega_p / 2)
    denom = gamma**3 + (gamma / 4) * sq + 1j * gamma**2 * delta_p
    return num / denom


def susceptibility(params: AtomicParams, rho24):
    """chi = prefactor * rho_24 / Omega_p.  Re is dispersion, -Im is absorption."""
    chi = params.prefactor * np.asarray(rho24) / params.probe_rabi
    if not np.all(np.isfinite(chi)):
        raise ValidationError("susceptibility: non-finite value")
    return chi[()] if chi.ndim == 0 else chi


def eit_linewidth(gamma, omega1, omega2):
    """Gamma_EIT = Gamma + (|Omega1|^2 + |Omega2|^2) / (4 Gamma)."""
    if not gamma > 0:
        raise ValidationError(f"gamma: must be > 0, got {gamma!r}")
    return gamma + (np.abs(omega1) ** 2 + np.abs(omega2) ** 2) / (4 * gamma)


def lorentzian_dispersion(delta_p, gamma_eit):
    # Unit amplitude; callers fit the scale.
    if np.any(np.asarray(gamma_eit) <= 0):
        raise ValidationError("gamma_eit: must be > 0")
    return delta_p / (delta_p**2 + gamma_eit**2)
