"""Delimited output files and the JSON run manifest.

All files are written with fixed column orders, repr-based float
formatting, and explicit line terminators, so repeated runs with the same
configuration are byte-identical.  Nothing in this module emits
timestamps or machine-specific paths.
"""

import csv
import json
import math
from pathlib import Path

from .config import RunConfig
from .dynamics import Trajectory
from .sweeps import AreaScanRow, SweepResult

MATERIALS_HEADER = ["hbar_omega_eV", "re_eps", "im_eps", "re_alpha_m3", "im_alpha_m3"]
DYNAMICS_HEADER = [
    "t_ps",
    "rho11",
    "rho22",
    "rho33",
    "re_rho21",
    "im_rho21",
    "re_rho32",
    "im_rho32",
    "re_rho31",
    "im_rho31",
    "pulse_envelope_norm",
]
SWEEP_HEADER = [
    "x_value",
    "y_value",
    "rho33_readout",
    "rho22_readout",
    "rho33_max",
    "rho22_max",
    "status",
]
AREA_SCAN_HEADER = [
    "area_pi",
    "rho33_readout",
    "rho22_readout",
    "rho33_max",
    "rho22_max",
    "adiabatic_rho33",
    "status",
]
FIRST_MAX_VALUE_COLUMNS = ["area_first_max_rad", "area_first_max_pi_units"]


def _fmt(value) -> str:
    return repr(float(value))


def _open_writer(path):
    handle = open(path, "w", newline="")
    return handle, csv.writer(handle, lineterminator="\n")


def write_materials_csv(path, spectrum_rows) -> None:
    """Rows as yielded by permittivity_spectrum, one CSV line per row."""
    handle, writer = _open_writer(path)
    with handle:
        writer.writerow(MATERIALS_HEADER)
        for row in spectrum_rows:
            writer.writerow([_fmt(v) for v in row])


def write_dynamics_csv(path, traj: Trajectory) -> None:
    envelope = traj.envelope_norm()
    handle, writer = _open_writer(path)
    with handle:
        writer.writerow(DYNAMICS_HEADER)
        for i, t in enumerate(traj.times_ps):
            writer.writerow(
                [
                    _fmt(t),
                    _fmt(traj.rho11[i]),
                    _fmt(traj.rho22[i]),
                    _fmt(traj.rho33[i]),
                    _fmt(traj.rho21[i].real),
                    _fmt(traj.rho21[i].imag),
                    _fmt(traj.rho32[i].real),
                    _fmt(traj.rho32[i].imag),
                    _fmt(traj.rho31[i].real),
                    _fmt(traj.rho31[i].imag),
                    _fmt(envelope[i]),
                ]
            )


def _write_metadata_lines(handle, metadata: dict) -> None:
    for key in sorted(metadata):
        handle.write(f"# {key} = {metadata[key]}\n")


def write_sweep_csv(path, result: SweepResult) -> None:
    handle, writer = _open_writer(path)
    with handle:
        meta = dict(result.metadata)
        meta["x_name"] = result.x_name
        meta["y_name"] = result.y_name
        _write_metadata_lines(handle, meta)
        writer.writerow(SWEEP_HEADER)
        for p in result.points:
            writer.writerow(
                [
                    _fmt(p.x_value),
                    _fmt(p.y_value),
                    _fmt(p.rho33_readout),
                    _fmt(p.rho22_readout),
                    _fmt(p.rho33_max),
                    _fmt(p.rho22_max),
                    p.status,
                ]
            )


def write_area_scan_csv(path, rows: list[AreaScanRow], metadata: dict) -> None:
    handle, writer = _open_writer(path)
    with handle:
        _write_metadata_lines(handle, metadata)
        writer.writerow(AREA_SCAN_HEADER)
        for r in rows:
            writer.writerow(
                [
                    _fmt(r.area_pi),
                    _fmt(r.rho33_readout),
                    _fmt(r.rho22_readout),
                    _fmt(r.rho33_max),
                    _fmt(r.rho22_max),
                    _fmt(r.adiabatic_rho33),
                    r.status,
                ]
            )


def write_first_maximum_csv(path, x_name: str, rows) -> None:
    """Rows: (x_value, first_max_area_rad).  x_name labels the scan axis."""
    handle, writer = _open_writer(path)
    with handle:
        writer.writerow([x_name] + FIRST_MAX_VALUE_COLUMNS)
        for x_value, area_rad in rows:
            writer.writerow([_fmt(x_value), _fmt(area_rad), _fmt(area_rad / math.pi)])


def write_run_manifest(path, config: RunConfig, command: str, outputs) -> None:
    """Machine-readable record of what a CLI invocation produced."""
    payload = {
        "command": command,
        "config_hash": config.config_hash(),
        "canonical_config": config.canonical_ini(),
        "outputs": sorted(Path(o).name for o in outputs),
    }
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    Path(path).write_text(text)
