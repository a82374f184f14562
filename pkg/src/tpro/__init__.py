"""Two-photon dynamics of a semiconductor quantum dot coupled to a metal
nanoparticle: materials response, drive renormalization, density-matrix
integration, closed-form adiabatic overlays, and parameter sweeps.
"""

from .adiabatic import (
    biexciton_population_adiabatic,
    effective_two_photon_area,
    effective_two_photon_rabi,
    perturbative_validity_ratio,
    pulse_area_first_maximum,
)
from .config import RunConfig
from .dynamics import (
    DensityMatrix,
    Detunings,
    DriveContext,
    IntegratorOptions,
    Trajectory,
    integrate,
)
from .hybrid import (
    FeedbackParams,
    HybridGeometry,
    SqdParams,
    effective_dielectric,
    enhancement_factor,
    feedback_parameters,
    isolated_feedback,
)
from .materials import (
    DrudeModel,
    dipole_polarizability,
    find_lsp_resonance,
    metal_permittivity,
    multipole_polarizability,
)
from .pulse import PulseParams, rabi_amplitude_external
from .sweeps import (
    area_scan,
    count_interior_maxima,
    locate_first_maximum,
    sweep_area_distance,
    sweep_area_duration,
)

__version__ = "0.1.0"

__all__ = [
    "DensityMatrix",
    "Detunings",
    "DriveContext",
    "DrudeModel",
    "FeedbackParams",
    "HybridGeometry",
    "IntegratorOptions",
    "PulseParams",
    "RunConfig",
    "SqdParams",
    "Trajectory",
    "area_scan",
    "biexciton_population_adiabatic",
    "count_interior_maxima",
    "dipole_polarizability",
    "effective_dielectric",
    "effective_two_photon_area",
    "effective_two_photon_rabi",
    "enhancement_factor",
    "feedback_parameters",
    "find_lsp_resonance",
    "integrate",
    "isolated_feedback",
    "locate_first_maximum",
    "metal_permittivity",
    "multipole_polarizability",
    "perturbative_validity_ratio",
    "pulse_area_first_maximum",
    "rabi_amplitude_external",
    "sweep_area_distance",
    "sweep_area_duration",
]
