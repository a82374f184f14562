"""Physical constants and unit conversions.

Interface units across the package are electron-volts for photon/transition
energies, nanometers for geometry, and e*nm for transition dipole moments.
Internally all rates and frequencies are angular, in rad/ps, and all
integration times are in ps.  Everything that converts between the two views
funnels through this module.
"""

# hbar in eV*ps (CODATA: 6.582119569e-16 eV*s)
HBAR_EV_PS = 6.582119569e-4

# hbar in J*s, for SI expressions involving the vacuum permittivity
HBAR_SI = 1.054571817e-34

# vacuum permittivity, F/m
EPS0_SI = 8.8541878128e-12

# elementary charge, C
E_CHARGE_C = 1.602176634e-19

# one e*nm in C*m
ENM_TO_CM = E_CHARGE_C * 1e-9

NM_TO_M = 1e-9

# 1/s -> 1/ps
PER_S_TO_PER_PS = 1e-12


def ev_to_radps(energy_ev: float) -> float:
    """Convert a photon/transition energy in eV to angular frequency in rad/ps."""
    return energy_ev / HBAR_EV_PS


def radps_to_ev(omega_radps: float) -> float:
    """Convert an angular frequency in rad/ps to the photon energy in eV."""
    return omega_radps * HBAR_EV_PS
