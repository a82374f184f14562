"""Density-matrix equations of motion and their integrators.

State layout: complex vector [rho11, rho22, rho33, rho21, rho32, rho31] in
the frame rotating at the optical carrier.  Populations are kept in complex
slots for uniformity but their derivatives are computed as real expressions,
so imaginary parts stay at exactly zero during integration.

Two independent integration routes are provided on purpose: a hand-stepped
fixed-grid RK4 and an adaptive scipy solver.  They are compared against each
other in the test suite; neither is allowed to drift behind a refactor of
the other.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .constants import ENM_TO_CM
from .errors import PositivityError, StiffnessError
from .hybrid import FeedbackParams, SqdParams
from .pulse import PulseParams, carrier_frequency, rabi_amplitude_external

ADAPTIVE = "adaptive"
FIXED_RK4 = "fixed_rk4"

# monitoring floors
TRACE_TOL = 1e-9
EIGENVALUE_FLOOR = -1e-6

# fixed-step resolution: steps per period of the fastest relevant rate
RK4_STEPS_PER_PERIOD = 200


@dataclass(frozen=True)
class Detunings:
    """Rotating-frame detunings (rad/ps).

    delta21: one-photon detuning of the one-exciton state.
    delta31: two-photon detuning of the biexciton state.
    delta32 is fixed by the other two, delta32 = delta31 - delta21.
    """

    delta21_radps: float
    delta31_radps: float

    @property
    def delta32_radps(self) -> float:
        return self.delta31_radps - self.delta21_radps

    @classmethod
    def from_carrier(cls, sqd: SqdParams, omega0_radps: float) -> "Detunings":
        return cls(
            delta21_radps=sqd.omega2_radps - omega0_radps,
            delta31_radps=sqd.omega3_radps - 2.0 * omega0_radps,
        )


@dataclass(frozen=True)
class DensityMatrix:
    rho11: float
    rho22: float
    rho33: float
    rho21: complex
    rho32: complex
    rho31: complex

    @classmethod
    def ground(cls) -> "DensityMatrix":
        return cls(1.0, 0.0, 0.0, 0.0 + 0.0j, 0.0 + 0.0j, 0.0 + 0.0j)

    @classmethod
    def from_vector(cls, y) -> "DensityMatrix":
        return cls(
            float(y[0].real),
            float(y[1].real),
            float(y[2].real),
            complex(y[3]),
            complex(y[4]),
            complex(y[5]),
        )

    def to_vector(self) -> np.ndarray:
        return np.array(
            [self.rho11, self.rho22, self.rho33, self.rho21, self.rho32, self.rho31],
            dtype=complex,
        )

    def matrix(self) -> np.ndarray:
        """Full Hermitian 3x3 matrix."""
        return np.array(
            [
                [self.rho11, np.conj(self.rho21), np.conj(self.rho31)],
                [self.rho21, self.rho22, np.conj(self.rho32)],
                [self.rho31, self.rho32, self.rho33],
            ],
            dtype=complex,
        )

    def trace(self) -> float:
        return self.rho11 + self.rho22 + self.rho33

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix())[0])


@dataclass(frozen=True)
class DriveContext:
    """Everything the right-hand side needs besides the state itself."""

    sqd: SqdParams
    pulse: PulseParams
    feedback: FeedbackParams
    detunings: Detunings

    @classmethod
    def build(
        cls, sqd: SqdParams, pulse: PulseParams, feedback: FeedbackParams
    ) -> "DriveContext":
        omega0 = carrier_frequency(pulse, sqd)
        return cls(
            sqd=sqd,
            pulse=pulse,
            feedback=feedback,
            detunings=Detunings.from_carrier(sqd, omega0),
        )

    def external_amplitude(self, t_ps):
        """Renormalized external Rabi amplitude of the lower transition."""
        return self.feedback.drive_factor * rabi_amplitude_external(t_ps, self.pulse)

    def peak_drive_radps(self) -> float:
        """Magnitude of the strongest renormalized Rabi amplitude."""
        peak21 = abs(self.feedback.drive_factor) * self.pulse.peak_amplitude_radps
        return max(peak21, self.sqd.mu_ratio * peak21)


def total_rabi_amplitudes(t_ps: float, y, ctx: DriveContext) -> tuple[complex, complex]:
    """Total complex Rabi amplitudes (lower, upper) including self-action."""
    fb = ctx.feedback
    ext21 = ctx.external_amplitude(t_ps)
    omega21 = ext21 + fb.g1_radps * y[3] + fb.g3_radps * y[4]
    omega32 = ctx.sqd.mu_ratio * ext21 + fb.g3_radps * y[3] + fb.g2_radps * y[4]
    return complex(omega21), complex(omega32)


def total_rabi_from_polarization(
    t_ps: float, y, ctx: DriveContext
) -> tuple[complex, complex]:
    """Oracle route for total_rabi_amplitudes.

    Rebuilds the self-action from the dot's polarization amplitude
    P = mu21*rho21 + mu32*rho32 and the shared geometric coefficient
    recovered from g3 (the cross term), instead of using g1 and g2
    directly.  Exact agreement with total_rabi_amplitudes is a structural
    property: the three feedback coefficients are one rank-1 family.
    """
    fb = ctx.feedback
    sqd = ctx.sqd
    mu21 = sqd.mu21_enm * ENM_TO_CM
    mu32 = sqd.mu32_enm * ENM_TO_CM
    shared = fb.g3_radps / (mu21 * mu32)
    polarization = mu21 * y[3] + mu32 * y[4]
    ext21 = ctx.external_amplitude(t_ps)
    omega21 = ext21 + mu21 * shared * polarization
    omega32 = sqd.mu_ratio * ext21 + mu32 * shared * polarization
    return complex(omega21), complex(omega32)


def rhs(t_ps: float, y, ctx: DriveContext) -> np.ndarray:
    """Time derivative of the state vector."""
    sqd = ctx.sqd
    det = ctx.detunings
    g21 = sqd.gamma21_per_ps
    g32 = sqd.gamma32_per_ps

    r22 = y[1].real
    r33 = y[2].real
    rho21 = y[3]
    rho32 = y[4]
    rho31 = y[5]

    omega21, omega32 = total_rabi_amplitudes(t_ps, y, ctx)
    z21 = y[1].real - y[0].real
    z32 = r33 - r22

    # real pumping terms: i(conj(w) rho - w conj(rho)) = 2 Im(w conj(rho))
    pump21 = 2.0 * (omega21 * np.conj(rho21)).imag
    pump32 = 2.0 * (omega32 * np.conj(rho32)).imag

    out = np.empty(6, dtype=complex)
    out[0] = g21 * r22 + pump21
    out[1] = -g21 * r22 + g32 * r33 - pump21 + pump32
    out[2] = -g32 * r33 - pump32
    out[3] = -(1j * det.delta21_radps + 0.5 * g21) * rho21 + 1j * (
        np.conj(omega32) * rho31 - omega21 * z21
    )
    out[4] = -(1j * det.delta32_radps + 0.5 * (g32 + g21)) * rho32 - 1j * (
        np.conj(omega21) * rho31 + omega32 * z32
    )
    out[5] = -(1j * det.delta31_radps + 0.5 * g32) * rho31 + 1j * (
        omega32 * rho21 - omega21 * rho32
    )
    return out


def rhs_expanded_coherences(
    t_ps: float, y, ctx: DriveContext
) -> tuple[complex, complex]:
    """Coherence derivatives with the self-action written out explicitly.

    Independent route for the rho21/rho32 equations: the feedback
    coefficients are expanded into state-dependent frequency shifts and
    rate corrections instead of being absorbed into the total Rabi
    amplitudes.  Must agree with rhs() to rounding error; exercised as an
    oracle in the tests.
    """
    sqd = ctx.sqd
    det = ctx.detunings
    fb = ctx.feedback
    g21 = sqd.gamma21_per_ps
    g32 = sqd.gamma32_per_ps
    g1, g2, g3 = fb.g1_radps, fb.g2_radps, fb.g3_radps

    rho21 = y[3]
    rho32 = y[4]
    rho31 = y[5]
    z21 = y[1].real - y[0].real
    z32 = y[2].real - y[1].real

    ext21 = ctx.external_amplitude(t_ps)
    ext32 = ctx.sqd.mu_ratio * ext21

    d21 = (
        -(1j * (det.delta21_radps + g1.real * z21) + 0.5 * g21 - g1.imag * z21) * rho21
        + 1j * (np.conj(ext32) * rho31 - ext21 * z21)
        + 1j
        * (
            (np.conj(g3) * np.conj(rho21) + np.conj(g2) * np.conj(rho32)) * rho31
            - g3 * rho32 * z21
        )
    )
    d32 = (
        -(1j * (det.delta32_radps + g2.real * z32) + 0.5 * (g32 + g21) - g2.imag * z32)
        * rho32
        - 1j * (np.conj(ext21) * rho31 + ext32 * z32)
        - 1j
        * (
            (np.conj(g1) * np.conj(rho21) + np.conj(g3) * np.conj(rho32)) * rho31
            + g3 * rho21 * z32
        )
    )
    return complex(d21), complex(d32)


def effective_rates_report(state: DensityMatrix, ctx: DriveContext) -> dict:
    """State-dependent shifts the self-action induces on the coherences.

    Returns the effective detunings and damping rates of rho21 and rho32
    once the feedback terms proportional to the same coherence are folded
    into the linear part of its equation of motion.
    """
    fb = ctx.feedback
    det = ctx.detunings
    sqd = ctx.sqd
    z21 = state.rho22 - state.rho11
    z32 = state.rho33 - state.rho22
    return {
        "detuning21_radps": det.delta21_radps + fb.g1_radps.real * z21,
        "detuning32_radps": det.delta32_radps + fb.g2_radps.real * z32,
        "rate21_per_ps": 0.5 * sqd.gamma21_per_ps - fb.g1_radps.imag * z21,
        "rate32_per_ps": 0.5 * (sqd.gamma21_per_ps + sqd.gamma32_per_ps)
        - fb.g2_radps.imag * z32,
    }


@dataclass(frozen=True)
class IntegratorOptions:
    method: str = ADAPTIVE
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    dt_ps: float | None = None  # fixed-step size; None picks the default policy
    n_samples: int = 2001
    start_ps: float | None = None  # None: pulse window start
    end_ps: float | None = None    # None: pulse window end (readout time)
    check_positivity: bool = True

    def __post_init__(self):
        if self.method not in (ADAPTIVE, FIXED_RK4):
            raise ValueError(f"unknown integrator method {self.method!r}")
        if self.n_samples < 2:
            raise ValueError("n_samples must be >= 2")


@dataclass
class Trajectory:
    """Sampled solution plus the drive context that produced it."""

    times_ps: np.ndarray
    states: np.ndarray  # (n_samples, 6) complex
    ctx: DriveContext
    method: str

    @property
    def rho11(self) -> np.ndarray:
        return self.states[:, 0].real

    @property
    def rho22(self) -> np.ndarray:
        return self.states[:, 1].real

    @property
    def rho33(self) -> np.ndarray:
        return self.states[:, 2].real

    @property
    def rho21(self) -> np.ndarray:
        return self.states[:, 3]

    @property
    def rho32(self) -> np.ndarray:
        return self.states[:, 4]

    @property
    def rho31(self) -> np.ndarray:
        return self.states[:, 5]

    def state_at(self, i: int) -> DensityMatrix:
        return DensityMatrix.from_vector(self.states[i])

    def readout_state(self) -> DensityMatrix:
        return self.state_at(-1)

    def envelope_norm(self) -> np.ndarray:
        """Pulse envelope normalized to unit peak, for plotting/CSV."""
        peak = self.ctx.pulse.peak_amplitude_radps
        env = rabi_amplitude_external(self.times_ps, self.ctx.pulse)
        return env / peak if peak > 0 else np.zeros_like(self.times_ps)

    def trace_errors(self) -> np.ndarray:
        return np.abs(self.states[:, :3].real.sum(axis=1) - 1.0)

    def min_eigenvalues(self) -> np.ndarray:
        n = len(self.times_ps)
        mats = np.empty((n, 3, 3), dtype=complex)
        mats[:, 0, 0] = self.states[:, 0]
        mats[:, 1, 1] = self.states[:, 1]
        mats[:, 2, 2] = self.states[:, 2]
        mats[:, 1, 0] = self.states[:, 3]
        mats[:, 0, 1] = np.conj(self.states[:, 3])
        mats[:, 2, 1] = self.states[:, 4]
        mats[:, 1, 2] = np.conj(self.states[:, 4])
        mats[:, 2, 0] = self.states[:, 5]
        mats[:, 0, 2] = np.conj(self.states[:, 5])
        return np.linalg.eigvalsh(mats)[:, 0]


def default_rk4_dt(ctx: DriveContext) -> float:
    """Fixed-step size for the RK4 route.

    The step resolves the fastest rate present in the problem: detunings,
    peak renormalized Rabi amplitudes, and the self-action coefficients.
    """
    det = ctx.detunings
    fastest = max(
        abs(det.delta21_radps),
        abs(det.delta32_radps),
        abs(det.delta31_radps),
        ctx.peak_drive_radps(),
        abs(ctx.feedback.g1_radps),
        abs(ctx.feedback.g2_radps),
        abs(ctx.feedback.g3_radps),
        1.0 / ctx.pulse.t0_ps,
    )
    return min(ctx.pulse.t0_ps, 2.0 * np.pi / fastest) / RK4_STEPS_PER_PERIOD


def _integrate_rk4(ctx, y0, t_start, t_end, dt, n_samples):
    """Classic fixed-step RK4 on a uniform grid.

    The step count is rounded up to a multiple of the sample intervals, so
    every sample lands exactly on a step boundary and the two integration
    routes can be compared pointwise.
    """
    n_intervals = n_samples - 1
    span = t_end - t_start
    per_interval = max(1, int(np.ceil(span / (dt * n_intervals))))
    h = span / (n_intervals * per_interval)
    out = np.empty((n_samples, 6), dtype=complex)
    y = y0.astype(complex).copy()
    out[0] = y
    step = 0
    for i in range(1, n_samples):
        for _ in range(per_interval):
            t = t_start + step * h
            k1 = rhs(t, y, ctx)
            k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1, ctx)
            k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2, ctx)
            k4 = rhs(t + h, y + h * k3, ctx)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            step += 1
        out[i] = y
    return out


def integrate(
    ctx: DriveContext,
    options: IntegratorOptions = IntegratorOptions(),
    initial: DensityMatrix | None = None,
) -> Trajectory:
    """Integrate the equations of motion over the pulse window.

    The trajectory starts from the ground state (unless an initial state is
    supplied) at the window start and is sampled on a uniform grid whose
    last point is the readout time.
    """
    window = ctx.pulse.window()
    t_start = window[0] if options.start_ps is None else options.start_ps
    t_end = window[1] if options.end_ps is None else options.end_ps
    if t_end <= t_start:
        raise ValueError("end_ps must exceed start_ps")
    y0 = (initial or DensityMatrix.ground()).to_vector()
    sample_times = np.linspace(t_start, t_end, options.n_samples)

    if options.method == FIXED_RK4:
        dt = options.dt_ps if options.dt_ps is not None else default_rk4_dt(ctx)
        states = _integrate_rk4(ctx, y0, t_start, t_end, dt, options.n_samples)
    else:
        sol = solve_ivp(
            rhs,
            (t_start, t_end),
            y0,
            method="DOP853",
            t_eval=sample_times,
            rtol=options.rel_tol,
            atol=options.abs_tol,
            max_step=ctx.pulse.t0_ps,
            args=(ctx,),
        )
        if not sol.success:
            raise StiffnessError(
                f"adaptive integrator failed: {sol.message} "
                f"(peak drive {ctx.peak_drive_radps():.3g} rad/ps, "
                f"window [{t_start:.3g}, {t_end:.3g}] ps)"
            )
        states = sol.y.T

    traj = Trajectory(
        times_ps=sample_times, states=states, ctx=ctx, method=options.method
    )
    if options.check_positivity:
        worst = float(traj.min_eigenvalues().min())
        if worst < EIGENVALUE_FLOOR:
            raise PositivityError(
                f"density-matrix eigenvalue {worst:.3e} fell below the "
                f"monitoring floor {EIGENVALUE_FLOOR:.0e}"
            )
    return traj
