"""Command-line interface.

Every command resolves a RunConfig (built-in defaults overlaid by an
optional INI file, then by command-line flags), writes its delimited
outputs plus a JSON run manifest into the output directory, and prints a
short summary to stdout.  Wall-clock timing goes to stderr only, so the
written files are byte-identical across repeated runs.

Exit codes: 0 success, 2 usage error, 3 missing configuration file,
4 configuration syntax error, 5 unknown configuration key, 6 value out of
range, 7 conflicting options, 8 numerical failure, 9 sweep finished with
failed grid points.
"""

import dataclasses
import time
from pathlib import Path

import click
import numpy as np

from .adiabatic import (
    DEFAULT_CORRECTION_PREFACTOR,
    issue_validity_warning,
    pulse_area_first_maximum,
)
from .config import RunConfig
from .constants import HBAR_EV_PS, NM_TO_M, radps_to_ev
from .dynamics import ADAPTIVE, FIXED_RK4, DriveContext, integrate
from .errors import (
    ConfigConflictError,
    ConfigFileMissingError,
    ConfigSyntaxError,
    PartialSweepError,
    TproError,
    UnknownKeyError,
    ValueRangeError,
)
from .hybrid import feedback_parameters
from .materials import find_lsp_resonance, permittivity_spectrum
from .reporting import (
    write_area_scan_csv,
    write_dynamics_csv,
    write_first_maximum_csv,
    write_materials_csv,
    write_run_manifest,
    write_sweep_csv,
)
from .sweeps import (
    area_scan,
    first_maximum_vs_distance,
    locate_first_maximum,
    standard_pulse,
    sweep_area_duration,
    sweep_area_distance,
)

MANIFEST_NAME = "run_manifest.json"

_EXIT_BY_TYPE = (
    (ConfigFileMissingError, 3),
    (ConfigSyntaxError, 4),
    (UnknownKeyError, 5),
    (ConfigConflictError, 7),
    (ValueRangeError, 6),
    (PartialSweepError, 9),
    (TproError, 8),
)


def exit_code_for(exc: TproError) -> int:
    for cls, code in _EXIT_BY_TYPE:
        if isinstance(exc, cls):
            return code
    return 1


class TproGroup(click.Group):
    """Group that maps domain exceptions onto the documented exit codes."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except TproError as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(exit_code_for(exc))


@click.group(cls=TproGroup)
@click.version_option(package_name="tpro")
def cli():
    """Two-photon dynamics of a quantum dot near a metal nanoparticle."""


main = cli


def _shared_options(f):
    f = click.option(
        "--config",
        "config_path",
        type=str,
        default=None,
        help="INI configuration file; omitted keys keep their defaults.",
    )(f)
    f = click.option(
        "--output-dir",
        type=str,
        default=None,
        help="Directory for output files (default from the configuration).",
    )(f)
    return f


def _pulse_options(f):
    f = click.option("--area-pi", type=float, default=None, help="Pulse area / pi.")(f)
    f = click.option(
        "--t0-ps", type=float, default=None, help="Gaussian pulse width (ps)."
    )(f)
    f = click.option(
        "--td-ps", type=float, default=None, help="Pulse delay (ps)."
    )(f)
    f = click.option(
        "--isolated",
        is_flag=True,
        help="Drop the nanoparticle: no enhancement, no self-action.",
    )(f)
    return f


def _load(config_path, output_dir=None, **overrides) -> RunConfig:
    base = (
        RunConfig.defaults() if config_path is None else RunConfig.from_file(config_path)
    )
    return base.with_overrides(output_dir=output_dir, **overrides)


def _out_dir(cfg: RunConfig) -> Path:
    path = Path(cfg.output_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _echo_wall_time(started: float) -> None:
    click.echo(f"wall time {time.perf_counter() - started:.2f} s", err=True)


def _finish(cfg, command, out_dir, outputs, started):
    manifest = out_dir / MANIFEST_NAME
    write_run_manifest(manifest, cfg, command, outputs)
    for path in list(outputs) + [manifest]:
        click.echo(f"wrote {path}")
    _echo_wall_time(started)


def _parse_float_list(raw: str, flag: str) -> list[float]:
    try:
        values = [float(tok) for tok in raw.split(",") if tok.strip()]
    except ValueError:
        raise click.BadParameter(f"could not parse {raw!r}", param_hint=flag)
    if not values:
        raise click.BadParameter("empty list", param_hint=flag)
    return values


@cli.command()
@_shared_options
@click.option("--lo-ev", type=float, default=1.5, show_default=True)
@click.option("--hi-ev", type=float, default=3.5, show_default=True)
@click.option("--points", type=int, default=401, show_default=True)
def materials(config_path, output_dir, lo_ev, hi_ev, points):
    """Tabulate the metal permittivity and sphere polarizability spectrum."""
    started = time.perf_counter()
    if not lo_ev < hi_ev:
        raise ValueRangeError("--lo-ev must be below --hi-ev")
    if points < 2:
        raise ValueRangeError("--points must be >= 2")
    cfg = _load(config_path, output_dir=output_dir)
    out_dir = _out_dir(cfg)
    rows = permittivity_spectrum(
        cfg.drude, cfg.eps_b, cfg.radius_nm * NM_TO_M, lo_ev, hi_ev, points
    )
    path = out_dir / "materials.csv"
    write_materials_csv(path, rows)
    resonance_ev = find_lsp_resonance(cfg.drude, cfg.eps_b, lo_ev, hi_ev)
    click.echo(f"surface-plasmon resonance: {resonance_ev:.4f} eV")
    _finish(cfg, "materials", out_dir, [path], started)


@cli.command("hybrid-info")
@_shared_options
def hybrid_info(config_path, output_dir):
    """Print the derived coupling constants for the configured geometry."""
    started = time.perf_counter()
    cfg = _load(config_path, output_dir=output_dir)
    feedback = cfg.feedback()
    carrier_ev = radps_to_ev(cfg.sqd.two_photon_carrier_radps)
    click.echo(f"carrier energy: {carrier_ev:.4f} eV")
    click.echo(f"local-field screening divisor: {feedback.eps_s_eff:.6f}")
    enh = feedback.enhancement
    click.echo(
        f"field enhancement: {enh.real:+.6f}{enh.imag:+.6f}j (|.| = {abs(enh):.4f})"
    )
    for name, g in (
        ("g1", feedback.g1_radps),
        ("g2", feedback.g2_radps),
        ("g3", feedback.g3_radps),
    ):
        click.echo(
            f"self-action {name}: |hbar*{name}| = "
            f"{abs(g) * HBAR_EV_PS * 1e3:.4f} meV"
        )
    if not cfg.isolated:
        resonance_ev = find_lsp_resonance(cfg.drude, cfg.eps_b, 1.5, 3.5)
        click.echo(f"surface-plasmon resonance: {resonance_ev:.4f} eV")
        click.echo(f"multipole terms used: {feedback.n_terms_used}")
    _echo_wall_time(started)


@cli.command()
@_shared_options
@_pulse_options
@click.option(
    "--method",
    type=click.Choice([ADAPTIVE, FIXED_RK4]),
    default=None,
    help="Integration route (default from the configuration).",
)
def dynamics(config_path, output_dir, area_pi, t0_ps, td_ps, isolated, method):
    """Integrate a single pulse and write the sampled trajectory."""
    started = time.perf_counter()
    cfg = _load(
        config_path,
        output_dir=output_dir,
        area_pi=area_pi,
        t0_ps=t0_ps,
        delay_ps=td_ps,
        isolated=isolated,
        method=method,
    )
    out_dir = _out_dir(cfg)
    ctx = DriveContext.build(cfg.sqd, cfg.pulse(), cfg.feedback())
    traj = integrate(ctx, cfg.integrator)
    readout = traj.readout_state()
    path = out_dir / "dynamics.csv"
    write_dynamics_csv(path, traj)
    click.echo(
        f"readout: rho33 = {readout.rho33:.6f}, rho22 = {readout.rho22:.6f}, "
        f"rho11 = {readout.rho11:.6f}"
    )
    click.echo(
        f"peaks: rho33 = {float(traj.rho33.max()):.6f}, "
        f"rho22 = {float(traj.rho22.max()):.6f}"
    )
    _finish(cfg, "dynamics", out_dir, [path], started)


def _sweep_epilogue(cfg, command, out_dir, path, result, started):
    _finish(cfg, command, out_dir, [path], started)
    if result.n_failed:
        raise PartialSweepError(
            f"{result.n_failed} of {len(result.points)} grid points failed; "
            f"see the status column in {path.name}"
        )
    click.echo(f"{len(result.points)} grid points, all ok")


@cli.command("sweep-area-duration")
@_shared_options
@click.option("--area-min-pi", type=float, default=0.5, show_default=True)
@click.option("--area-max-pi", type=float, default=12.0, show_default=True)
@click.option("--area-points", type=int, default=24, show_default=True)
@click.option(
    "--t0-list-ps",
    type=str,
    default="0.25,0.5,1.0,2.0",
    show_default=True,
    help="Comma-separated pulse widths (ps).",
)
@click.option("--isolated", is_flag=True)
def sweep_area_duration_cmd(
    config_path, output_dir, area_min_pi, area_max_pi, area_points, t0_list_ps, isolated
):
    """Readout populations over a pulse-area x pulse-duration grid."""
    started = time.perf_counter()
    if not 0.0 <= area_min_pi < area_max_pi:
        raise ValueRangeError("need 0 <= --area-min-pi < --area-max-pi")
    if area_points < 2:
        raise ValueRangeError("--area-points must be >= 2")
    t0s = _parse_float_list(t0_list_ps, "--t0-list-ps")
    if any(t0 <= 0 for t0 in t0s):
        raise ValueRangeError("all pulse widths must be positive")
    cfg = _load(config_path, output_dir=output_dir, isolated=isolated)
    out_dir = _out_dir(cfg)
    areas_pi = np.linspace(area_min_pi, area_max_pi, area_points)
    result = sweep_area_duration(areas_pi, t0s, cfg.sqd, cfg.feedback())
    result.metadata["isolated"] = str(cfg.isolated).lower()
    path = out_dir / "sweep_area_duration.csv"
    write_sweep_csv(path, result)
    _sweep_epilogue(cfg, "sweep-area-duration", out_dir, path, result, started)


@cli.command("sweep-area-distance")
@_shared_options
@click.option("--area-min-pi", type=float, default=0.5, show_default=True)
@click.option("--area-max-pi", type=float, default=12.0, show_default=True)
@click.option("--area-points", type=int, default=24, show_default=True)
@click.option("--d-min-nm", type=float, default=18.0, show_default=True)
@click.option("--d-max-nm", type=float, default=40.0, show_default=True)
@click.option("--d-points", type=int, default=12, show_default=True)
@click.option(
    "--t0-ps", type=float, default=None, help="Pulse width (default from config)."
)
def sweep_area_distance_cmd(
    config_path,
    output_dir,
    area_min_pi,
    area_max_pi,
    area_points,
    d_min_nm,
    d_max_nm,
    d_points,
    t0_ps,
):
    """Readout populations over a pulse-area x particle-distance grid."""
    started = time.perf_counter()
    if not 0.0 <= area_min_pi < area_max_pi:
        raise ValueRangeError("need 0 <= --area-min-pi < --area-max-pi")
    if area_points < 2 or d_points < 2:
        raise ValueRangeError("--area-points and --d-points must be >= 2")
    cfg = _load(config_path, output_dir=output_dir, t0_ps=t0_ps)
    if cfg.isolated:
        raise ConfigConflictError(
            "distance sweep needs a hybrid geometry, but the configuration "
            "selects an isolated dot"
        )
    if not cfg.radius_nm < d_min_nm < d_max_nm:
        raise ValueRangeError(
            "need particle radius < --d-min-nm < --d-max-nm for a valid scan"
        )
    out_dir = _out_dir(cfg)
    areas_pi = np.linspace(area_min_pi, area_max_pi, area_points)
    distances = np.linspace(d_min_nm, d_max_nm, d_points)
    result = sweep_area_distance(
        areas_pi, distances, cfg.sqd, cfg.geometry(), cfg.t0_ps
    )
    path = out_dir / "sweep_area_distance.csv"
    write_sweep_csv(path, result)
    _sweep_epilogue(cfg, "sweep-area-distance", out_dir, path, result, started)


@cli.command("area-scan")
@_shared_options
@click.option("--area-min-pi", type=float, default=0.0, show_default=True)
@click.option("--area-max-pi", type=float, default=12.0, show_default=True)
@click.option("--area-points", type=int, default=121, show_default=True)
@click.option("--t0-ps", type=float, default=None)
@click.option("--isolated", is_flag=True)
@click.option(
    "--correction-prefactor",
    type=float,
    default=DEFAULT_CORRECTION_PREFACTOR,
    show_default=True,
    help="Empirical rescaling of the predicted first-maximum area.",
)
def area_scan_cmd(
    config_path,
    output_dir,
    area_min_pi,
    area_max_pi,
    area_points,
    t0_ps,
    isolated,
    correction_prefactor,
):
    """Scan the pulse area at fixed width, with the closed-form overlay."""
    started = time.perf_counter()
    if not 0.0 <= area_min_pi < area_max_pi:
        raise ValueRangeError("need 0 <= --area-min-pi < --area-max-pi")
    if area_points < 2:
        raise ValueRangeError("--area-points must be >= 2")
    cfg = _load(config_path, output_dir=output_dir, t0_ps=t0_ps, isolated=isolated)
    out_dir = _out_dir(cfg)
    feedback = cfg.feedback()
    areas_pi = np.linspace(area_min_pi, area_max_pi, area_points)
    rows = area_scan(areas_pi, cfg.sqd, feedback, cfg.t0_ps)
    predicted = pulse_area_first_maximum(
        cfg.sqd, cfg.t0_ps, feedback, correction_prefactor
    )
    metadata = {
        "t0_ps": repr(float(cfg.t0_ps)),
        "isolated": str(cfg.isolated).lower(),
        "correction_prefactor": repr(float(correction_prefactor)),
        "predicted_first_max_area_pi": repr(float(predicted / np.pi)),
    }
    path = out_dir / "area_scan.csv"
    write_area_scan_csv(path, rows, metadata)
    issue_validity_warning(
        standard_pulse(area_max_pi * np.pi, cfg.t0_ps), cfg.sqd, feedback
    )
    n_failed = sum(1 for r in rows if r.status != "ok")
    _finish(cfg, "area-scan", out_dir, [path], started)
    if n_failed:
        raise PartialSweepError(
            f"{n_failed} of {len(rows)} grid points failed; "
            f"see the status column in {path.name}"
        )
    click.echo(f"{len(rows)} grid points, all ok")


@cli.command()
@_shared_options
@click.option(
    "--scan",
    type=click.Choice(["duration", "distance"]),
    default="duration",
    show_default=True,
    help="Axis of the closed-form first-maximum table.",
)
@click.option(
    "--t0-list-ps",
    type=str,
    default="0.25,0.4,0.65822,1.0,1.64554",
    show_default=True,
    help="Pulse widths for --scan duration (ps).",
)
@click.option("--d-min-nm", type=float, default=18.0, show_default=True)
@click.option("--d-max-nm", type=float, default=40.0, show_default=True)
@click.option("--d-points", type=int, default=12, show_default=True)
@click.option("--isolated", is_flag=True)
@click.option(
    "--numeric",
    is_flag=True,
    help="Locate first maxima by full integration instead of the closed form.",
)
@click.option(
    "--correction-prefactor",
    type=float,
    default=DEFAULT_CORRECTION_PREFACTOR,
    show_default=True,
    help="Empirical rescaling applied to the closed-form prediction.",
)
def adiabatic(
    config_path,
    output_dir,
    scan,
    t0_list_ps,
    d_min_nm,
    d_max_nm,
    d_points,
    isolated,
    numeric,
    correction_prefactor,
):
    """Tabulate the pulse area of the first biexciton maximum."""
    started = time.perf_counter()
    cfg = _load(config_path, output_dir=output_dir, isolated=isolated)
    out_dir = _out_dir(cfg)
    if scan == "duration":
        t0s = _parse_float_list(t0_list_ps, "--t0-list-ps")
        if any(t0 <= 0 for t0 in t0s):
            raise ValueRangeError("all pulse widths must be positive")
        feedback = cfg.feedback()
        if numeric:
            rows = [
                (t0, locate_first_maximum(cfg.sqd, feedback, t0).area_rad)
                for t0 in t0s
            ]
        else:
            rows = [
                (
                    t0,
                    pulse_area_first_maximum(
                        cfg.sqd, t0, feedback, correction_prefactor
                    ),
                )
                for t0 in t0s
            ]
        path = out_dir / "adiabatic_duration.csv"
        write_first_maximum_csv(path, "t0_ps", rows)
    else:
        if cfg.isolated:
            raise ConfigConflictError(
                "distance scan needs a hybrid geometry, but the configuration "
                "selects an isolated dot"
            )
        if d_points < 2:
            raise ValueRangeError("--d-points must be >= 2")
        if not cfg.radius_nm < d_min_nm < d_max_nm:
            raise ValueRangeError(
                "need particle radius < --d-min-nm < --d-max-nm for a valid scan"
            )
        distances = np.linspace(d_min_nm, d_max_nm, d_points)
        if numeric:
            located = first_maximum_vs_distance(
                distances, cfg.sqd, cfg.geometry(), cfg.t0_ps
            )
            rows = [(d, fm.area_rad) for d, fm in located]
        else:
            omega0 = cfg.sqd.two_photon_carrier_radps
            rows = []
            for d in distances:
                geom_d = dataclasses.replace(cfg.geometry(), distance_nm=float(d))
                fb_d = feedback_parameters(geom_d, cfg.sqd, omega0)
                rows.append(
                    (
                        float(d),
                        pulse_area_first_maximum(
                            cfg.sqd, cfg.t0_ps, fb_d, correction_prefactor
                        ),
                    )
                )
        path = out_dir / "adiabatic_distance.csv"
        write_first_maximum_csv(path, "d_nm", rows)
    _finish(cfg, "adiabatic", out_dir, [path], started)


if __name__ == "__main__":
    main()
