"""Quasi-static optical response of a metal nanosphere.

Permittivity follows a Drude model, and the sphere's response to an applied
field is expressed through multipole polarizabilities in the geometric
(volume) convention: the dipole term has units of m^3 and already includes
the background screening of the host medium.
"""

from dataclasses import dataclass

import numpy as np

from .constants import HBAR_EV_PS, radps_to_ev
from .errors import BracketError, SingularDenominatorError

# Relative floor under which a response denominator counts as singular.
DENOMINATOR_FLOOR = 1e-9

# Grid size for the diagnostic Re-alpha minimum search.
RE_ALPHA_GRID_POINTS = 2001


@dataclass(frozen=True)
class DrudeModel:
    """Free-electron permittivity model: eps_inf - wp^2 / (w^2 + i*gamma*w).

    eps_inf absorbs the bound-electron background.  The damping here is an
    effective value for the visible range: it lumps interband absorption into
    the free-electron loss term, which is why it is much larger than a pure
    dc scattering rate.
    """

    eps_inf: float = 9.84           # high-frequency background
    plasma_energy_ev: float = 9.01  # hbar * omega_p
    damping_energy_ev: float = 0.43  # hbar * gamma_p, effective

    def __post_init__(self):
        if self.plasma_energy_ev <= 0:
            raise ValueError("plasma_energy_ev must be positive")
        if self.damping_energy_ev <= 0:
            raise ValueError("damping_energy_ev must be positive")


@dataclass(frozen=True)
class Polarizability:
    """Complex multipole polarizability of order n, units m^(2n+1)."""

    order: int
    value: complex

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be >= 1")


def _permittivity_ev(model: DrudeModel, energy_ev: float) -> complex:
    """Drude permittivity at photon energy in eV, no domain guard."""
    return model.eps_inf - model.plasma_energy_ev**2 / (
        energy_ev**2 + 1j * model.damping_energy_ev * energy_ev
    )


def metal_permittivity(model: DrudeModel, omega_radps: float) -> complex:
    """Drude permittivity at angular frequency omega (rad/ps).

    Raises ValueError for non-positive omega; the negative-frequency value
    is fixed by the reality condition eps(-w) = conj(eps(w)).
    """
    if omega_radps <= 0:
        raise ValueError("omega_radps must be positive")
    return _permittivity_ev(model, radps_to_ev(omega_radps))


def _guard_denominator(den: complex, eps_b: float) -> complex:
    if abs(den) < DENOMINATOR_FLOOR * abs(eps_b):
        raise SingularDenominatorError(
            f"response denominator |{den:.3e}| is below the floor "
            f"{DENOMINATOR_FLOOR:.0e} * |eps_b|; driving at an undamped resonance"
        )
    return den


def dipole_polarizability(
    model: DrudeModel, eps_b: float, omega_radps: float, radius_m: float
) -> Polarizability:
    """Dipole polarizability 4*pi*r^3 (eps_m - eps_b)/(eps_m + 2 eps_b), m^3."""
    if eps_b <= 0:
        raise ValueError("eps_b must be positive")
    if radius_m <= 0:
        raise ValueError("radius_m must be positive")
    eps_m = metal_permittivity(model, omega_radps)
    den = _guard_denominator(eps_m + 2.0 * eps_b, eps_b)
    value = 4.0 * np.pi * radius_m**3 * (eps_m - eps_b) / den
    return Polarizability(order=1, value=complex(value))


def multipole_polarizability(
    model: DrudeModel, eps_b: float, omega_radps: float, radius_m: float, order: int
) -> Polarizability:
    """Multipole polarizability of order n >= 1, units m^(2n+1).

    4*pi*r^(2n+1) (eps_m - eps_b) / (eps_m + (n+1)/n * eps_b); order 1
    reproduces the dipole form.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if eps_b <= 0:
        raise ValueError("eps_b must be positive")
    if radius_m <= 0:
        raise ValueError("radius_m must be positive")
    eps_m = metal_permittivity(model, omega_radps)
    den = _guard_denominator(eps_m + (order + 1) / order * eps_b, eps_b)
    value = 4.0 * np.pi * radius_m ** (2 * order + 1) * (eps_m - eps_b) / den
    return Polarizability(order=order, value=complex(value))


def find_lsp_resonance(
    model: DrudeModel,
    eps_b: float,
    lo_ev: float,
    hi_ev: float,
    tol_ev: float = 1e-6,
) -> float:
    """Locate the surface-plasmon resonance energy (eV) by bisection.

    The resonance is defined as the root of Re[eps_m(w)] + 2*eps_b = 0,
    i.e. the pole condition of the dipole polarizability denominator with
    losses ignored.  The bracket [lo_ev, hi_ev] must contain exactly one
    sign change, otherwise BracketError is raised.
    """
    if not (0 < lo_ev < hi_ev):
        raise ValueError("need 0 < lo_ev < hi_ev")

    def g(e):
        return _permittivity_ev(model, e).real + 2.0 * eps_b

    g_lo, g_hi = g(lo_ev), g(hi_ev)
    if g_lo == 0.0:
        return lo_ev
    if g_hi == 0.0:
        return hi_ev
    if g_lo * g_hi > 0:
        raise BracketError(
            f"no sign change of Re[eps_m] + 2*eps_b on [{lo_ev}, {hi_ev}] eV"
        )
    lo, hi = lo_ev, hi_ev
    while hi - lo > tol_ev:
        mid = 0.5 * (lo + hi)
        g_mid = g(mid)
        if g_mid == 0.0:
            return mid
        if g_lo * g_mid < 0:
            hi = mid
        else:
            lo, g_lo = mid, g_mid
    return 0.5 * (lo + hi)


def re_alpha_minimum_ev(
    model: DrudeModel,
    eps_b: float,
    lo_ev: float,
    hi_ev: float,
    n_grid: int = RE_ALPHA_GRID_POINTS,
) -> float:
    """Diagnostic companion to find_lsp_resonance: grid argmin of Re[alpha].

    With finite damping this lands slightly off the bisection root; the two
    are reported side by side and deliberately not reconciled.
    """
    if not (0 < lo_ev < hi_ev):
        raise ValueError("need 0 < lo_ev < hi_ev")
    energies = np.linspace(lo_ev, hi_ev, n_grid)
    # radius only scales Re[alpha]; use 1 m so the argmin is radius-free
    re_alpha = [
        (
            4.0 * np.pi * (_permittivity_ev(model, e) - eps_b)
            / (_permittivity_ev(model, e) + 2.0 * eps_b)
        ).real
        for e in energies
    ]
    return float(energies[int(np.argmin(re_alpha))])


def permittivity_spectrum(
    model: DrudeModel,
    eps_b: float,
    radius_m: float,
    lo_ev: float,
    hi_ev: float,
    n_points: int,
):
    """Yield (hbar_omega_eV, re_eps, im_eps, re_alpha_m3, im_alpha_m3) rows."""
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    for e in np.linspace(lo_ev, hi_ev, n_points):
        eps_m = _permittivity_ev(model, float(e))
        omega = float(e) / HBAR_EV_PS
        alpha = dipole_polarizability(model, eps_b, omega, radius_m)
        yield (
            float(e),
            eps_m.real,
            eps_m.imag,
            alpha.value.real,
            alpha.value.imag,
        )
