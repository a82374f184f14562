"""Closed-form two-photon theory in the adiabatic-elimination limit.

When the one-exciton level is far detuned (drive weak compared to the
level splitting) the three-level ladder reduces to an effective two-level
system between ground and biexciton states.  This module provides the
effective coupling, pulse area, and population formulas of that limit,
used as overlays and sanity checks against the full density-matrix
integration.  All inputs are magnitudes; the self-action coefficients do
not enter at this order.
"""

import warnings

import numpy as np

from .errors import PerturbativeLimitWarning
from .hybrid import FeedbackParams, SqdParams
from .pulse import PulseParams, rabi_amplitude_external

# fraction of half the level splitting beyond which the effective
# two-level reduction is no longer trustworthy
PERTURBATIVE_DRIVE_FRACTION = 0.5

# empirical overlay calibration: ratio of the numerically observed
# first-maximum pulse area to the bare closed-form prediction
DEFAULT_CORRECTION_PREFACTOR = 0.62


def _drive_magnitude(feedback: FeedbackParams) -> float:
    return abs(feedback.drive_factor)


def effective_two_photon_rabi(
    t_ps, pulse: PulseParams, sqd: SqdParams, feedback: FeedbackParams
):
    """Instantaneous effective ground-biexciton coupling (rad/ps)."""
    drive = _drive_magnitude(feedback) * rabi_amplitude_external(t_ps, pulse)
    return (2.0 / sqd.delta_b_radps) * sqd.mu_ratio * drive**2


def effective_two_photon_area(
    pulse: PulseParams, sqd: SqdParams, feedback: FeedbackParams
) -> float:
    """Time integral of the effective coupling over the whole pulse.

    For the Gaussian envelope the integral is analytic; this closed form
    is cross-checked against numerical quadrature of
    effective_two_photon_rabi in the tests.
    """
    scaled_area = _drive_magnitude(feedback) * pulse.area_rad
    return (
        np.sqrt(2.0 / np.pi)
        * sqd.mu_ratio
        * scaled_area**2
        / (sqd.delta_b_radps * pulse.t0_ps)
    )


def biexciton_population_adiabatic(effective_area_rad: float) -> float:
    """Final biexciton population predicted by the effective two-level map."""
    return float(np.sin(0.5 * effective_area_rad) ** 2)


def pulse_area_first_maximum(
    sqd: SqdParams,
    t0_ps: float,
    feedback: FeedbackParams,
    correction_prefactor: float = DEFAULT_CORRECTION_PREFACTOR,
) -> float:
    """Pulse area (rad) at which the first biexciton maximum is predicted.

    Setting the effective area to pi and solving for the pulse area gives
    the bare prediction; the correction prefactor rescales it to track the
    full integration, which peaks earlier than the effective two-level map
    suggests.
    """
    if not 0.0 < correction_prefactor <= 1.0:
        raise ValueError("correction_prefactor must lie in (0, 1]")
    if t0_ps <= 0.0:
        raise ValueError("t0_ps must be positive")
    bare = (1.0 / _drive_magnitude(feedback)) * np.sqrt(
        np.pi
        * np.sqrt(np.pi / 2.0)
        * (1.0 / sqd.mu_ratio)
        * sqd.delta_b_radps
        * t0_ps
    )
    return correction_prefactor * float(bare)


def perturbative_validity_ratio(
    pulse: PulseParams, sqd: SqdParams, feedback: FeedbackParams
) -> float:
    """Peak renormalized drive over the perturbative bound.

    Values above 1 mean the adiabatic elimination behind the closed forms
    is outside its validity window; issue_validity_warning turns that into
    a warning for report paths.
    """
    peak = _drive_magnitude(feedback) * pulse.peak_amplitude_radps
    peak = max(peak, sqd.mu_ratio * peak)
    bound = PERTURBATIVE_DRIVE_FRACTION * 0.5 * sqd.delta_b_radps
    return peak / bound


def issue_validity_warning(
    pulse: PulseParams, sqd: SqdParams, feedback: FeedbackParams
) -> bool:
    ratio = perturbative_validity_ratio(pulse, sqd, feedback)
    if ratio > 1.0:
        warnings.warn(
            f"peak renormalized Rabi amplitude exceeds the perturbative "
            f"bound by a factor {ratio:.2f}; adiabatic overlay values are "
            f"indicative only",
            PerturbativeLimitWarning,
            stacklevel=2,
        )
        return True
    return False
