"""Gaussian drive pulse.

The envelope is expressed directly as the external Rabi amplitude of the
lower transition,

    omega0(t) = (A / (sqrt(pi) t0)) * exp(-((t - td)/t0)^2),

so its time integral equals the pulse area A (radians).
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .hybrid import SqdParams

TWO_PHOTON_RESONANCE = "two_photon_resonance"
EXPLICIT_CARRIER = "explicit"

# half-width of the standard simulation window, in units of t0
WINDOW_HALF_WIDTH = 6.0

# relative accuracy demanded from the quadrature cross-check
AREA_QUAD_RTOL = 1e-8


@dataclass(frozen=True)
class PulseParams:
    """Pulse area (rad), center delay and width (ps), and carrier choice.

    carrier selects how the optical frequency is fixed: locked to half the
    biexciton-state frequency (the coherent two-photon resonance), or given
    explicitly through omega0_radps.
    """

    area_rad: float
    t0_ps: float
    delay_ps: float
    carrier: str = TWO_PHOTON_RESONANCE
    omega0_radps: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.area_rad) and self.area_rad >= 0):
            raise ValueError("area_rad must be finite and non-negative")
        if not (math.isfinite(self.t0_ps) and self.t0_ps > 0):
            raise ValueError("t0_ps must be finite and positive")
        if not math.isfinite(self.delay_ps):
            raise ValueError("delay_ps must be finite")
        if self.carrier not in (TWO_PHOTON_RESONANCE, EXPLICIT_CARRIER):
            raise ValueError(f"unknown carrier mode {self.carrier!r}")
        if self.carrier == EXPLICIT_CARRIER and self.omega0_radps is None:
            raise ValueError("explicit carrier requires omega0_radps")

    @property
    def peak_amplitude_radps(self) -> float:
        return self.area_rad / (np.sqrt(np.pi) * self.t0_ps)

    @property
    def area_pi_units(self) -> float:
        return self.area_rad / np.pi

    def window(self) -> tuple[float, float]:
        """Default simulation window [delay - 6 t0, delay + 6 t0]."""
        return (
            self.delay_ps - WINDOW_HALF_WIDTH * self.t0_ps,
            self.delay_ps + WINDOW_HALF_WIDTH * self.t0_ps,
        )


def rabi_amplitude_external(t_ps, pulse: PulseParams):
    """External Rabi amplitude of the lower transition at time t (rad/ps).

    Accepts scalars or numpy arrays.
    """
    x = (np.asarray(t_ps) - pulse.delay_ps) / pulse.t0_ps
    return pulse.peak_amplitude_radps * np.exp(-(x**2))


def pulse_fwhm(pulse: PulseParams) -> float:
    """Full width at half maximum of the envelope: 2*sqrt(ln 2)*t0."""
    return 2.0 * np.sqrt(np.log(2.0)) * pulse.t0_ps


def carrier_frequency(pulse: PulseParams, sqd: SqdParams) -> float:
    """Resolve the optical carrier frequency (rad/ps) for a given dot."""
    if pulse.carrier == EXPLICIT_CARRIER:
        return float(pulse.omega0_radps)
    return sqd.two_photon_carrier_radps


def numeric_area(pulse: PulseParams, t_lo_ps: float, t_hi_ps: float) -> float:
    """Quadrature of the envelope over [t_lo, t_hi] (rad).

    Serves as an independent cross-check that the envelope normalization
    really integrates to area_rad.  The window must contain the standard
    simulation window, otherwise a truncated integral would silently pass
    for the full area.
    """
    lo, hi = pulse.window()
    if t_lo_ps > lo or t_hi_ps < hi:
        raise ValueError(
            f"integration window [{t_lo_ps}, {t_hi_ps}] must contain [{lo}, {hi}]"
        )
    value, _ = quad(
        lambda t: rabi_amplitude_external(t, pulse),
        t_lo_ps,
        t_hi_ps,
        epsabs=0.0,
        epsrel=AREA_QUAD_RTOL * 1e-2,
        limit=200,
    )
    return float(value)
