"""Parameter-regime algebra: rates, conditions, gain and feasibility.

Jump resolution needs two separations of scale against the thermalization
rate gamma[nbar(n+1) + (nbar+1)n] of the highest Fock level to be resolved:
the cavity must respond faster (adiabatic condition, on kappa) and the
record must distinguish neighbouring levels faster (fast-measurement
condition, on Gamma = chi^2/kappa).  "Much greater" is operationalized as a
ratio of at least 10 for the boolean flags; the raw ratios are always
reported so callers can apply their own threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# CODATA/SI exact values
K_B = 1.380649e-23   # J/K
HBAR = 1.054571817e-34  # J s

CONDITION_THRESHOLD = 10.0


def thermalization_rate(n: int, nbar: float, gamma: float) -> float:
    """Bath-induced departure rate gamma[nbar(n+1) + (nbar+1)n] of Fock level n."""
    if n < 0 or nbar < 0 or gamma < 0:
        raise ValueError("n, nbar and gamma must be >= 0")
    return gamma * (nbar * (n + 1) + (nbar + 1) * n)


def fock_lifetime(n: int, nbar: float, gamma: float) -> float:
    """Typical lifetime of Fock level n, the inverse thermalization rate."""
    rate = thermalization_rate(n, nbar, gamma)
    return math.inf if rate == 0 else 1.0 / rate


def measurement_rate(chi: float, kappa: float) -> float:
    """Rate Gamma = chi^2/kappa at which the record separates adjacent levels."""
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    return chi**2 / kappa


@dataclass(frozen=True)
class RegimeReport:
    """Both regime conditions evaluated for one parameter set."""

    thermalization_rate: float
    meas_rate: float
    adiabatic_ratio: float
    fast_meas_ratio: float
    gain: float
    adiabatic_ok: bool
    fast_ok: bool

    def lines(self):
        yield f"thermalization rate   {self.thermalization_rate:.6g}"
        yield f"measurement rate      {self.meas_rate:.6g}"
        yield (f"adiabatic ratio       {self.adiabatic_ratio:.6g}  "
               f"({'ok' if self.adiabatic_ok else 'NOT met'})")
        yield (f"fast-measurement ratio {self.fast_meas_ratio:.6g}  "
               f"({'ok' if self.fast_ok else 'NOT met'})")
        yield f"gain chi/kappa        {self.gain:.6g}"


def check_conditions(params, n_max: int) -> RegimeReport:
    """Evaluate both conditions for resolving jumps up to Fock level n_max.

    ``params`` needs kappa, gamma, nbar and chi attributes (a SimParams
    works).  With gamma = 0 both ratios are infinite and both flags true.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    rate = thermalization_rate(n_max, params.nbar, params.gamma)
    meas = measurement_rate(params.chi, params.kappa)
    adiabatic = params.kappa / rate if rate > 0 else math.inf
    fast = meas / rate if rate > 0 else math.inf
    return RegimeReport(
        thermalization_rate=rate,
        meas_rate=meas,
        adiabatic_ratio=adiabatic,
        fast_meas_ratio=fast,
        gain=params.chi / params.kappa,
        adiabatic_ok=adiabatic >= CONDITION_THRESHOLD,
        fast_ok=fast >= CONDITION_THRESHOLD,
    )


def steady_cavity_amplitude(eps: complex, kappa: float,
                            delta: float = 0.0) -> complex:
    """Steady amplitude -i eps / (kappa/2 + i delta) of the driven cavity.

    The drive phase may always be chosen to rotate this onto the real axis
    (the rotation angle is the argument of the returned value); the regime
    and coupling formulas only use the modulus.
    """
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    return -1j * eps / (0.5 * kappa + 1j * delta)


def chi_from_drive(g2: float, alpha0: float) -> float:
    """Effective coupling chi = 2 G alpha0 from the quadratic single-photon
    coupling G and the real steady drive amplitude alpha0."""
    if alpha0 < 0:
        raise ValueError("alpha0 must be >= 0 (use the modulus)")
    return 2.0 * g2 * alpha0


@dataclass(frozen=True)
class FeasibilityReport:
    """High-temperature-limit check of both conditions for a real device."""

    thermal_rate: float       # k_B T / (Q hbar), the rate both must beat
    kappa: float
    meas_rate: float
    adiabatic_margin: float
    fast_margin: float
    adiabatic_ok: bool
    fast_ok: bool

    def lines(self):
        yield f"k_B T / (Q hbar)      {self.thermal_rate:.6g} 1/s"
        yield (f"adiabatic margin      kappa / thermal = {self.adiabatic_margin:.6g}"
               f"  ({'ok' if self.adiabatic_ok else 'NOT met'})")
        yield (f"fast-measurement margin chi^2/kappa / thermal = "
               f"{self.fast_margin:.6g}  ({'ok' if self.fast_ok else 'NOT met'})")


def feasibility(temperature: float, quality: float, kappa: float,
                chi: float) -> FeasibilityReport:
    """Evaluate kappa >> k_B T/(Q hbar) and chi^2/kappa >> k_B T/(Q hbar).

    Valid for a ground-state-cooled mode with bath temperature far above the
    level spacing, where nbar*gamma ~ k_B T/(Q hbar).  All quantities in SI.
    """
    if temperature <= 0 or quality <= 0:
        raise ValueError("temperature and quality factor must be positive")
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    thermal = K_B * temperature / (quality * HBAR)
    meas = measurement_rate(chi, kappa)
    return FeasibilityReport(
        thermal_rate=thermal,
        kappa=kappa,
        meas_rate=meas,
        adiabatic_margin=kappa / thermal,
        fast_margin=meas / thermal,
        adiabatic_ok=kappa / thermal >= CONDITION_THRESHOLD,
        fast_ok=meas / thermal >= CONDITION_THRESHOLD,
    )
