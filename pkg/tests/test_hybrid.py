import dataclasses

import numpy as np
import pytest

from tpro.constants import (
    ENM_TO_CM,
    EPS0_SI,
    HBAR_EV_PS,
    HBAR_SI,
    NM_TO_M,
    ev_to_radps,
)
from tpro.errors import MultipoleConvergenceError
from tpro.hybrid import (
    HybridGeometry,
    SqdParams,
    effective_dielectric,
    enhancement_factor,
    feedback_parameters,
    isolated_feedback,
)
from tpro.materials import multipole_polarizability


def test_sqd_derived_frequencies(default_sqd):
    assert default_sqd.omega2_radps == pytest.approx(2.36 / HBAR_EV_PS, rel=1e-14)
    assert default_sqd.delta_b_radps == pytest.approx(30.3853, rel=1e-4)
    # ladder closes: biexciton level sits at twice the carrier
    assert default_sqd.omega3_radps == pytest.approx(
        2.0 * default_sqd.omega2_radps - default_sqd.delta_b_radps, rel=1e-14
    )
    assert default_sqd.two_photon_carrier_radps * HBAR_EV_PS == pytest.approx(
        2.35, rel=1e-12
    )
    assert default_sqd.mu_ratio == pytest.approx(4.0 / 3.0, rel=1e-14)


def test_sqd_validation():
    with pytest.raises(ValueError):
        SqdParams(mu21_enm=0.0)
    with pytest.raises(ValueError):
        SqdParams(gamma32_per_ps=-0.1)


def test_geometry_validation():
    with pytest.raises(ValueError):
        HybridGeometry(radius_nm=12.0, distance_nm=12.0)
    with pytest.raises(ValueError):
        HybridGeometry(radius_nm=-1.0)


def test_effective_dielectric_default():
    assert effective_dielectric(6.0, 2.16) == pytest.approx(1.592593, abs=1e-6)
    with pytest.raises(ValueError):
        effective_dielectric(-6.0, 2.16)


def test_enhancement_frozen_value(default_geometry, default_sqd):
    enh = enhancement_factor(default_geometry, default_sqd.two_photon_carrier_radps)
    assert enh.real == pytest.approx(1.6286582604, rel=1e-8)
    assert enh.imag == pytest.approx(1.4745504275, rel=1e-8)
    assert abs(enh) == pytest.approx(2.1970, abs=2e-4)


def test_enhancement_decays_to_unity(default_geometry, default_sqd):
    omega = default_sqd.two_photon_carrier_radps
    far = dataclasses.replace(default_geometry, distance_nm=400.0)
    assert abs(enhancement_factor(far, omega) - 1.0) < 5e-3
    near = enhancement_factor(default_geometry, omega)
    assert abs(near - 1.0) > 0.5


def test_feedback_frozen_magnitudes(hybrid_feedback):
    mev = 1e3 * HBAR_EV_PS
    assert abs(hybrid_feedback.g1_radps) * mev == pytest.approx(0.30183444, rel=1e-6)
    assert abs(hybrid_feedback.g2_radps) * mev == pytest.approx(0.53659456, rel=1e-6)
    assert abs(hybrid_feedback.g3_radps) * mev == pytest.approx(0.40244592, rel=1e-6)


def test_feedback_rank_one_family(hybrid_feedback, default_sqd):
    g1, g2, g3 = (
        hybrid_feedback.g1_radps,
        hybrid_feedback.g2_radps,
        hybrid_feedback.g3_radps,
    )
    assert abs(g1 * g2 - g3**2) / abs(g3**2) < 1e-12
    # coefficient ratios are fixed by the dipole moments alone
    mu_sq = (default_sqd.mu21_enm / default_sqd.mu32_enm) ** 2
    assert g1 / g2 == pytest.approx(mu_sq, rel=1e-12)
    assert g3 / g2 == pytest.approx(
        default_sqd.mu21_enm / default_sqd.mu32_enm, rel=1e-12
    )


def test_feedback_against_direct_sum(default_geometry, default_sqd):
    # independent route: accumulate (n+1)^2 alpha_n / d^(2n+4) term by term
    # with explicit powers instead of the ratio-factorized production form
    omega = default_sqd.two_photon_carrier_radps
    # lengths kept in nanometres so the bare powers never underflow; one
    # global unit conversion to 1/m^3 happens at the end
    d_nm = default_geometry.distance_nm
    total_per_nm3 = 0.0 + 0.0j
    for order in range(1, 46):
        alpha_nm = multipole_polarizability(
            default_geometry.drude,
            default_geometry.eps_b,
            omega,
            default_geometry.radius_nm,
            order,
        )
        total_per_nm3 += (order + 1) ** 2 * alpha_nm.value / d_nm ** (2 * order + 4)
    total = total_per_nm3 / NM_TO_M**3
    eps_eff = effective_dielectric(default_sqd.eps_s, default_geometry.eps_b)
    shared = total / (
        16.0 * np.pi**2 * HBAR_SI * EPS0_SI * default_geometry.eps_b * eps_eff
    )
    mu21 = default_sqd.mu21_enm * ENM_TO_CM
    mu32 = default_sqd.mu32_enm * ENM_TO_CM
    fb = feedback_parameters(default_geometry, default_sqd, omega)
    assert fb.g1_radps == pytest.approx(mu21**2 * shared * 1e-12, rel=1e-10)
    assert fb.g2_radps == pytest.approx(mu32**2 * shared * 1e-12, rel=1e-10)
    assert fb.g3_radps == pytest.approx(mu21 * mu32 * shared * 1e-12, rel=1e-10)


def test_feedback_truncation_converged(default_geometry, default_sqd):
    omega = default_sqd.two_photon_carrier_radps
    fb50 = feedback_parameters(default_geometry, default_sqd, omega)
    fb45 = feedback_parameters(
        dataclasses.replace(default_geometry, n_max=45), default_sqd, omega
    )
    assert fb50.g1_radps == pytest.approx(fb45.g1_radps, rel=1e-12)
    assert 30 < fb50.n_terms_used <= 50


def test_feedback_truncation_error_carries_partials(default_geometry, default_sqd):
    omega = default_sqd.two_photon_carrier_radps
    short = dataclasses.replace(default_geometry, n_max=5)
    with pytest.raises(MultipoleConvergenceError) as info:
        feedback_parameters(short, default_sqd, omega)
    err = info.value
    assert err.n_terms == 5
    converged = feedback_parameters(default_geometry, default_sqd, omega)
    # five terms of a sum that needs about forty: right order of magnitude,
    # visibly short of the converged value
    assert abs(err.partial_g1) == pytest.approx(abs(converged.g1_radps), rel=0.25)
    assert abs(err.partial_g1) != pytest.approx(abs(converged.g1_radps), rel=1e-3)


def test_feedback_decays_with_distance(default_geometry, default_sqd):
    omega = default_sqd.two_photon_carrier_radps
    mags = []
    for d_nm in (18.0, 25.0, 40.0):
        geom = dataclasses.replace(default_geometry, distance_nm=d_nm)
        mags.append(abs(feedback_parameters(geom, default_sqd, omega).g2_radps))
    assert mags[0] > mags[1] > mags[2]


def test_isolated_feedback(default_sqd):
    fb = isolated_feedback(default_sqd)
    assert fb.enhancement == 1.0 + 0.0j
    assert fb.g1_radps == 0.0 + 0.0j
    assert fb.g2_radps == 0.0 + 0.0j
    assert fb.g3_radps == 0.0 + 0.0j
    assert fb.drive_factor == pytest.approx(1.0 / 1.592593, rel=1e-6)


def test_drive_factor(hybrid_feedback):
    assert hybrid_feedback.drive_factor == pytest.approx(
        hybrid_feedback.enhancement / hybrid_feedback.eps_s_eff, rel=1e-14
    )
    assert abs(hybrid_feedback.drive_factor) == pytest.approx(
        2.1970 / 1.592593, abs=2e-4
    )
