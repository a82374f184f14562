"""Parameter sweeps over pulse area, duration, and particle distance.

Each grid point is an independent full integration of the equations of
motion, so points run in a process pool when TPRO_WORKERS allows it.
Workers never raise: a failing point is recorded with a failure status and
NaN observables, and the sweep keeps going.  Results are assembled by
index, so output ordering is deterministic regardless of worker count.
"""

import dataclasses
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .adiabatic import (
    biexciton_population_adiabatic,
    effective_two_photon_area,
    pulse_area_first_maximum,
)
from .dynamics import DriveContext, IntegratorOptions, integrate
from .hybrid import (
    FeedbackParams,
    HybridGeometry,
    SqdParams,
    feedback_parameters,
)
from .pulse import PulseParams

WORKERS_ENV_VAR = "TPRO_WORKERS"
STATUS_OK = "ok"

# a readout maximum must clear this population to count as a fringe
MAXIMUM_THRESHOLD = 0.01

# first-maximum search: window relative to the bare closed-form area,
# coarse sampling density, and refinement tolerance in grid spacings
SEARCH_LO_FRACTION = 0.05
SEARCH_HI_FRACTION = 1.6
SEARCH_GRID_POINTS = 61
REFINE_XATOL_FRACTION = 1e-2


def resolve_workers() -> int:
    """Worker count for sweep grids, from the TPRO_WORKERS environment."""
    raw = os.environ.get(WORKERS_ENV_VAR, "")
    try:
        n = int(raw)
    except ValueError:
        n = os.cpu_count() or 1
    return max(1, n)


def standard_pulse(area_rad: float, t0_ps: float) -> PulseParams:
    """Pulse with the delay fixed so the window starts at t = 0."""
    return PulseParams(area_rad=area_rad, t0_ps=t0_ps, delay_ps=6.0 * t0_ps)


@dataclass(frozen=True)
class PointObservables:
    rho33_readout: float
    rho22_readout: float
    rho33_max: float
    rho22_max: float


@dataclass(frozen=True)
class SweepPoint:
    x_value: float
    y_value: float
    rho33_readout: float
    rho22_readout: float
    rho33_max: float
    rho22_max: float
    status: str


@dataclass
class SweepResult:
    x_name: str
    y_name: str
    points: list[SweepPoint]
    metadata: dict

    @property
    def n_failed(self) -> int:
        return sum(1 for p in self.points if p.status != STATUS_OK)


def _solve_observables(
    sqd: SqdParams,
    feedback: FeedbackParams,
    area_rad: float,
    t0_ps: float,
    n_samples: int,
) -> PointObservables:
    ctx = DriveContext.build(sqd, standard_pulse(area_rad, t0_ps), feedback)
    traj = integrate(ctx, IntegratorOptions(n_samples=n_samples))
    readout = traj.readout_state()
    return PointObservables(
        rho33_readout=readout.rho33,
        rho22_readout=readout.rho22,
        rho33_max=float(traj.rho33.max()),
        rho22_max=float(traj.rho22.max()),
    )


def _solve_task(task) -> tuple[int, float, float, PointObservables | None, str]:
    """Process-pool entry point; must stay module-level and exception-free."""
    index, x_value, y_value, sqd, feedback, area_rad, t0_ps, n_samples = task
    try:
        obs = _solve_observables(sqd, feedback, area_rad, t0_ps, n_samples)
        return index, x_value, y_value, obs, STATUS_OK
    except Exception as exc:  # noqa: BLE001 - point failures must not kill the sweep
        return index, x_value, y_value, None, f"failed: {type(exc).__name__}: {exc}"


def _run_tasks(tasks, workers: int) -> list[SweepPoint]:
    if workers <= 1 or len(tasks) <= 1:
        raw = [_solve_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            raw = list(pool.map(_solve_task, tasks))
    points: list[SweepPoint | None] = [None] * len(tasks)
    for index, x_value, y_value, obs, status in raw:
        if obs is None:
            obs = PointObservables(math.nan, math.nan, math.nan, math.nan)
        points[index] = SweepPoint(
            x_value=x_value,
            y_value=y_value,
            rho33_readout=obs.rho33_readout,
            rho22_readout=obs.rho22_readout,
            rho33_max=obs.rho33_max,
            rho22_max=obs.rho22_max,
            status=status,
        )
    return points


def sweep_area_duration(
    areas_pi,
    t0s_ps,
    sqd: SqdParams,
    feedback: FeedbackParams,
    n_samples: int = 1201,
    workers: int | None = None,
) -> SweepResult:
    """Readout populations over a pulse-area x pulse-duration grid."""
    workers = resolve_workers() if workers is None else workers
    tasks = []
    index = 0
    for t0 in t0s_ps:
        for area_pi in areas_pi:
            tasks.append(
                (index, area_pi, t0, sqd, feedback, area_pi * np.pi, t0, n_samples)
            )
            index += 1
    points = _run_tasks(tasks, workers)
    return SweepResult(
        x_name="area_pi",
        y_name="t0_ps",
        points=points,
        metadata={"sweep": "area_duration"},
    )


def sweep_area_distance(
    areas_pi,
    distances_nm,
    sqd: SqdParams,
    geometry: HybridGeometry,
    t0_ps: float,
    n_samples: int = 1201,
    workers: int | None = None,
) -> SweepResult:
    """Readout populations over a pulse-area x particle-distance grid.

    The feedback coefficients are recomputed for every distance at the
    two-photon resonance carrier; pulse duration is held fixed.
    """
    workers = resolve_workers() if workers is None else workers
    omega0 = sqd.two_photon_carrier_radps
    tasks = []
    index = 0
    for d_nm in distances_nm:
        geom_d = dataclasses.replace(geometry, distance_nm=d_nm)
        feedback = feedback_parameters(geom_d, sqd, omega0)
        for area_pi in areas_pi:
            tasks.append(
                (index, area_pi, d_nm, sqd, feedback, area_pi * np.pi, t0_ps, n_samples)
            )
            index += 1
    points = _run_tasks(tasks, workers)
    return SweepResult(
        x_name="area_pi",
        y_name="distance_nm",
        points=points,
        metadata={"sweep": "area_distance", "t0_ps": repr(float(t0_ps))},
    )


@dataclass(frozen=True)
class AreaScanRow:
    area_pi: float
    rho33_readout: float
    rho22_readout: float
    rho33_max: float
    rho22_max: float
    adiabatic_rho33: float
    status: str


def area_scan(
    areas_pi,
    sqd: SqdParams,
    feedback: FeedbackParams,
    t0_ps: float,
    n_samples: int = 1201,
    workers: int | None = None,
) -> list[AreaScanRow]:
    """Readout populations versus pulse area with the closed-form overlay."""
    workers = resolve_workers() if workers is None else workers
    tasks = [
        (i, area_pi, t0_ps, sqd, feedback, area_pi * np.pi, t0_ps, n_samples)
        for i, area_pi in enumerate(areas_pi)
    ]
    points = _run_tasks(tasks, workers)
    rows = []
    for point in points:
        pulse = standard_pulse(point.x_value * np.pi, t0_ps)
        overlay = biexciton_population_adiabatic(
            effective_two_photon_area(pulse, sqd, feedback)
        )
        rows.append(
            AreaScanRow(
                area_pi=point.x_value,
                rho33_readout=point.rho33_readout,
                rho22_readout=point.rho22_readout,
                rho33_max=point.rho33_max,
                rho22_max=point.rho22_max,
                adiabatic_rho33=overlay,
                status=point.status,
            )
        )
    return rows


def readout_rho33(
    area_rad: float,
    t0_ps: float,
    sqd: SqdParams,
    feedback: FeedbackParams,
    n_samples: int = 601,
) -> float:
    """Biexciton population at the readout time for a single pulse."""
    ctx = DriveContext.build(sqd, standard_pulse(area_rad, t0_ps), feedback)
    traj = integrate(ctx, IntegratorOptions(n_samples=n_samples))
    return traj.readout_state().rho33


def count_interior_maxima(values, threshold: float = MAXIMUM_THRESHOLD) -> int:
    """Strict local maxima above the threshold, endpoints excluded."""
    v = np.asarray(values, dtype=float)
    if v.size < 3:
        return 0
    interior = v[1:-1]
    is_max = (interior > v[:-2]) & (interior > v[2:]) & (interior > threshold)
    return int(np.count_nonzero(is_max))


@dataclass(frozen=True)
class FirstMaximum:
    area_rad: float
    rho33: float

    @property
    def area_pi_units(self) -> float:
        return self.area_rad / np.pi


def locate_first_maximum(
    sqd: SqdParams,
    feedback: FeedbackParams,
    t0_ps: float,
    grid_points: int = SEARCH_GRID_POINTS,
    n_samples: int = 601,
    workers: int | None = None,
) -> FirstMaximum:
    """Pulse area of the first readout-population maximum.

    Coarse scan over a window centred on the bare closed-form prediction,
    then bounded scalar refinement between the bracketing grid neighbours.
    """
    workers = resolve_workers() if workers is None else workers
    bare = pulse_area_first_maximum(sqd, t0_ps, feedback, correction_prefactor=1.0)
    grid = np.linspace(
        SEARCH_LO_FRACTION * bare, SEARCH_HI_FRACTION * bare, grid_points
    )
    tasks = [
        (i, a, t0_ps, sqd, feedback, a, t0_ps, n_samples)
        for i, a in enumerate(grid)
    ]
    points = _run_tasks(tasks, workers)
    failed = [p for p in points if p.status != STATUS_OK]
    if failed:
        raise RuntimeError(
            f"first-maximum scan had {len(failed)} failed points; "
            f"first: {failed[0].status}"
        )
    values = np.array([p.rho33_readout for p in points])
    peak_index = None
    for i in range(1, len(values) - 1):
        if (
            values[i] > values[i - 1]
            and values[i] > values[i + 1]
            and values[i] > MAXIMUM_THRESHOLD
        ):
            peak_index = i
            break
    if peak_index is None:
        raise ValueError(
            f"no interior readout maximum in the search window "
            f"[{grid[0]:.4g}, {grid[-1]:.4g}] rad at t0 = {t0_ps:.4g} ps"
        )
    spacing = grid[1] - grid[0]
    result = minimize_scalar(
        lambda a: -readout_rho33(a, t0_ps, sqd, feedback, n_samples=n_samples),
        bounds=(grid[peak_index - 1], grid[peak_index + 1]),
        method="bounded",
        options={"xatol": REFINE_XATOL_FRACTION * spacing},
    )
    return FirstMaximum(area_rad=float(result.x), rho33=float(-result.fun))


def first_maximum_vs_distance(
    distances_nm,
    sqd: SqdParams,
    geometry: HybridGeometry,
    t0_ps: float,
    grid_points: int = SEARCH_GRID_POINTS,
    n_samples: int = 601,
    workers: int | None = None,
) -> list[tuple[float, FirstMaximum]]:
    """Numerical first-maximum area at each particle distance."""
    omega0 = sqd.two_photon_carrier_radps
    out = []
    for d_nm in distances_nm:
        geom_d = dataclasses.replace(geometry, distance_nm=d_nm)
        feedback = feedback_parameters(geom_d, sqd, omega0)
        out.append(
            (
                float(d_nm),
                locate_first_maximum(
                    sqd,
                    feedback,
                    t0_ps,
                    grid_points=grid_points,
                    n_samples=n_samples,
                    workers=workers,
                ),
            )
        )
    return out
