"""Quantum-dot and dot-nanoparticle coupling parameters.

The emitter is a three-level ladder (ground, one-exciton, biexciton).  A
nearby metal nanosphere does two things to it: the incident field arrives
enhanced by the sphere's dipole response, and the emitter's own oscillating
polarization reflects off the sphere and acts back on it.  The reflected
part is captured by three complex feedback coefficients proportional to the
dipole-moment products mu21*mu21, mu32*mu32 and mu21*mu32, all sharing one
geometric multipole sum.
"""

from dataclasses import dataclass

import numpy as np

from .constants import (
    ENM_TO_CM,
    EPS0_SI,
    HBAR_SI,
    NM_TO_M,
    PER_S_TO_PER_PS,
    ev_to_radps,
)
from .errors import MultipoleConvergenceError
from .materials import DrudeModel, dipole_polarizability, metal_permittivity

# Relative size at which a further multipole term counts as converged.
MULTIPOLE_TERM_FLOOR = 1e-12


@dataclass(frozen=True)
class SqdParams:
    """Three-level quantum dot: energies in eV, decay rates in 1/ps,
    dipole moments in e*nm."""

    exciton_energy_ev: float = 2.36     # one-exciton transition energy
    binding_energy_ev: float = 0.020    # biexciton binding energy
    gamma21_per_ps: float = 1.0 / 220.0  # one-exciton radiative decay
    gamma32_per_ps: float = 1.0 / 120.0  # biexciton radiative decay
    mu21_enm: float = 0.6               # ground <-> one-exciton dipole
    mu32_enm: float = 0.8               # one-exciton <-> biexciton dipole
    eps_s: float = 6.0                  # static dielectric constant of the dot

    def __post_init__(self):
        for name in (
            "exciton_energy_ev",
            "binding_energy_ev",
            "gamma21_per_ps",
            "gamma32_per_ps",
            "mu21_enm",
            "mu32_enm",
            "eps_s",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    @property
    def omega2_radps(self) -> float:
        """One-exciton transition frequency."""
        return ev_to_radps(self.exciton_energy_ev)

    @property
    def delta_b_radps(self) -> float:
        """Biexciton binding frequency."""
        return ev_to_radps(self.binding_energy_ev)

    @property
    def omega3_radps(self) -> float:
        """Biexciton state frequency: 2*(omega2 - delta_b/2)."""
        return 2.0 * (self.omega2_radps - 0.5 * self.delta_b_radps)

    @property
    def two_photon_carrier_radps(self) -> float:
        """Carrier frequency of the coherent two-photon resonance, omega3/2."""
        return 0.5 * self.omega3_radps

    @property
    def mu_ratio(self) -> float:
        return self.mu32_enm / self.mu21_enm


@dataclass(frozen=True)
class HybridGeometry:
    """Nanosphere next to the dot, center-to-center distance d along the
    field polarization axis, everything embedded in a host with eps_b."""

    radius_nm: float = 12.0
    distance_nm: float = 18.0
    eps_b: float = 2.16
    drude: DrudeModel = DrudeModel()
    n_max: int = 50  # multipole truncation order

    def __post_init__(self):
        if self.radius_nm <= 0:
            raise ValueError("radius_nm must be positive")
        if self.distance_nm <= self.radius_nm:
            raise ValueError("distance_nm must exceed radius_nm")
        if self.eps_b <= 0:
            raise ValueError("eps_b must be positive")
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")


@dataclass(frozen=True)
class FeedbackParams:
    """Drive renormalization for the dot.

    enhancement is the complex factor 1 + alpha/(2 pi d^3) by which the
    incident field amplitude at the dot is multiplied; eps_s_eff is the
    local-field screening divisor; g1, g2, g3 (rad/ps) are the self-action
    coefficients multiplying the coherences in the total Rabi amplitudes.
    Isolated dot: enhancement = 1, g_i = 0, screening unchanged.
    """

    enhancement: complex
    eps_s_eff: float
    g1_radps: complex
    g2_radps: complex
    g3_radps: complex
    n_terms_used: int = 0

    @property
    def drive_factor(self) -> complex:
        """Complex factor applied to the external Rabi amplitude."""
        return self.enhancement / self.eps_s_eff


def effective_dielectric(eps_s: float, eps_b: float) -> float:
    """Local-field screening factor (eps_s + 2*eps_b) / (3*eps_b)."""
    if eps_s <= 0 or eps_b <= 0:
        raise ValueError("dielectric constants must be positive")
    return (eps_s + 2.0 * eps_b) / (3.0 * eps_b)


def enhancement_factor(geom: HybridGeometry, omega_radps: float) -> complex:
    """Complex field-enhancement factor 1 + alpha(omega)/(2 pi d^3)."""
    alpha = dipole_polarizability(
        geom.drude, geom.eps_b, omega_radps, geom.radius_nm * NM_TO_M
    )
    d_m = geom.distance_nm * NM_TO_M
    return 1.0 + alpha.value / (2.0 * np.pi * d_m**3)


def isolated_feedback(sqd: SqdParams, eps_b: float = 2.16) -> FeedbackParams:
    """Feedback parameters of a dot with no nanoparticle present."""
    return FeedbackParams(
        enhancement=1.0 + 0.0j,
        eps_s_eff=effective_dielectric(sqd.eps_s, eps_b),
        g1_radps=0.0 + 0.0j,
        g2_radps=0.0 + 0.0j,
        g3_radps=0.0 + 0.0j,
        n_terms_used=0,
    )


def feedback_parameters(
    geom: HybridGeometry, sqd: SqdParams, omega_radps: float
) -> FeedbackParams:
    """Evaluate enhancement and self-action coefficients at the carrier.

    The shared geometric sum is S = sum_n (n+1)^2 * alpha_n(omega) / d^(2n+4)
    with alpha_n the order-n sphere polarizability.  Each term is computed
    through the ratio (r/d)^(2n+1) so that neither r^(2n+1) nor d^(2n+4) is
    ever materialized alone; at order ~50 those factors over- or underflow a
    double while their ratio is tame.  The sum stops early once the next
    term falls below MULTIPOLE_TERM_FLOOR of the running total; if that
    never happens within n_max terms, MultipoleConvergenceError carries the
    partial coefficient values.
    """
    eps_m = metal_permittivity(geom.drude, omega_radps)
    eps_b = geom.eps_b
    eps_s_eff = effective_dielectric(sqd.eps_s, eps_b)
    d_m = geom.distance_nm * NM_TO_M
    size_ratio = geom.radius_nm / geom.distance_nm

    # S accumulates in units 1/m^3: (4 pi / d^3) * (r/d)^(2n+1) * resonance factor
    prefactor = 4.0 * np.pi / d_m**3
    total = 0.0 + 0.0j
    converged = False
    n_used = geom.n_max
    for n in range(1, geom.n_max + 1):
        den = eps_m + (n + 1) / n * eps_b
        term = (n + 1) ** 2 * prefactor * size_ratio ** (2 * n + 1) * (eps_m - eps_b) / den
        total += term
        if abs(term) < MULTIPOLE_TERM_FLOOR * abs(total):
            converged = True
            n_used = n
            break

    mu21 = sqd.mu21_enm * ENM_TO_CM
    mu32 = sqd.mu32_enm * ENM_TO_CM
    shared = total / (16.0 * np.pi**2 * HBAR_SI * EPS0_SI * eps_b * eps_s_eff)
    shared *= PER_S_TO_PER_PS  # rad/s -> rad/ps
    g1 = mu21 * mu21 * shared
    g2 = mu32 * mu32 * shared
    g3 = mu21 * mu32 * shared

    if not converged:
        raise MultipoleConvergenceError(
            f"multipole sum not converged after {geom.n_max} terms "
            f"(size ratio r/d = {size_ratio:.3f}); raise n_max",
            partial_g1=g1,
            partial_g2=g2,
            partial_g3=g3,
            n_terms=geom.n_max,
        )

    return FeedbackParams(
        enhancement=enhancement_factor(geom, omega_radps),
        eps_s_eff=eps_s_eff,
        g1_radps=g1,
        g2_radps=g2,
        g3_radps=g3,
        n_terms_used=n_used,
    )
