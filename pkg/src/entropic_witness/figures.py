"""Data tables behind each figure, with fixed parameter presets."""

import csv
import json
from pathlib import Path

import numpy as np

from ._validation import DomainError
from .geometry import region_mesh, write_mesh_csv
from .reservoir import (
    TRAJECTORY_COLUMNS,
    Lorentzian,
    OhmicClass,
    apply_channel,
    critical_time,
    evolve,
    lorentzian_trajectory,
    solve_volterra_p,
    witness_intervals,
    witnessed_region,
)
from .states import EwlSpec, ewl_state
from .uncertainty import report_table

BELL_PSI = EwlSpec("psi")
BELL_PHI = EwlSpec("phi")

PRESETS = {
    "1b": {"kind": "mesh", "r": [0.0, 0.0, 0.0], "s": [0.0, 0.0, 0.0], "resolution": 41},
    "1c": {"kind": "mesh", "r": [0.0, 0.0, 0.25], "s": [0.0, 0.0, 0.25], "resolution": 41},
    "1d": {"kind": "mesh", "r": [0.1, 0.1, 0.25], "s": [0.1, 0.1, 0.25], "resolution": 41},
    "2a": {"kind": "p_sweep", "family": "psi", "points": 1001},
    "2b": {"kind": "p_sweep", "family": "phi", "points": 1001},
    "3": {"kind": "p_plane", "family": "psi", "points": 201},
}
for _fig, _family, _s, _t_max in (
    ("4a", "psi", 0.5, 10.0),
    ("4b", "phi", 0.5, 10.0),
    ("4c", "psi", 1.0, 10.0),
    ("4d", "phi", 1.0, 10.0),
    ("4e", "psi", 3.0, 30.0),
    ("4f", "phi", 3.0, 30.0),
):
    PRESETS[_fig] = {
        "kind": "ohmic",
        "family": _family,
        "s": _s,
        "eta": 0.01,
        "omega_c": 2.0,
        "t_max": _t_max,
        "step": 0.005,
        "tol": 1e-6,
    }
# Fig. 6 panels replot 5(c) and 5(d)
for _fig, _family, _delta in (
    ("5a", "psi", 0.0),
    ("5b", "phi", 0.0),
    ("5c", "psi", 0.8),
    ("5d", "phi", 0.8),
    ("6a", "psi", 0.8),
    ("6b", "phi", 0.8),
):
    PRESETS[_fig] = {
        "kind": "lorentzian",
        "family": _family,
        "lambda": 0.1,
        "delta": _delta,
        "gamma0": 1.0,
        "t_max": 30.0,
        "step": 0.002,
    }

FIGURE_IDS = tuple(PRESETS)


def _fmt(x):
    return repr(float(x))


def write_table(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])


def write_trajectory_csv(path, wtraj):
    write_table(path, TRAJECTORY_COLUMNS, wtraj.rows())


def witness_summary(wtraj, estimators=("te", "me", "fe")):
    """Witness intervals, covered concurrence region and critical time per estimator."""
    out = {}
    for est in estimators:
        intervals = witness_intervals(wtraj, est)
        region = witnessed_region(intervals)
        tc = critical_time(wtraj, est)
        out[est] = {
            "intervals": [
                {"t_start": iv.t_start, "t_end": iv.t_end, "c_min": iv.c_min, "c_max": iv.c_max} for iv in intervals
            ],
            "region": list(region) if region else None,
            "critical_time": None if tc is None else ("inf" if np.isinf(tc) else tc),
        }
    return out


def _family_spec(family):
    return BELL_PSI if family == "psi" else BELL_PHI


def _p_sweep(preset):
    p = np.linspace(0.0, 1.0, preset["points"])
    table = report_table(apply_channel(ewl_state(_family_spec(preset["family"])), p))
    cols = ("te", "me", "fe", "bb", "concurrence", "chsh")
    return ("abs_p",) + cols, np.column_stack([p] + [table[c] for c in cols])


def _p_plane(preset):
    axis = np.linspace(-1.0, 1.0, preset["points"])
    re, im = np.meshgrid(axis, axis, indexing="ij")
    p = (re + 1j * im).ravel()
    p = p[np.abs(p) <= 1.0]
    table = report_table(apply_channel(ewl_state(_family_spec(preset["family"])), p))
    return ("re_p", "im_p", "me", "fe"), np.column_stack([p.real, p.imag, table["me"], table["fe"]])


def trajectory_for(preset):
    if preset["kind"] == "ohmic":
        model = OhmicClass(preset["s"], preset["eta"], preset["omega_c"])
        return solve_volterra_p(model, preset["t_max"], preset["step"], tol=preset["tol"])
    model = Lorentzian(preset["lambda"], preset["delta"], preset["gamma0"])
    return lorentzian_trajectory(model, preset["t_max"], preset["step"])


def make_figure(fig_id, outdir):
    """Write ``fig<id>.csv`` and ``fig<id>.manifest.json`` into ``outdir``; return the paths."""
    if fig_id not in PRESETS:
        raise DomainError(f"unknown figure id {fig_id!r}; choose from {', '.join(FIGURE_IDS)}")
    preset = PRESETS[fig_id]
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = outdir / f"fig{fig_id}.csv"
    manifest = {"figure": fig_id, "parameters": preset, "files": [csv_path.name]}

    kind = preset["kind"]
    if kind == "mesh":
        write_mesh_csv(region_mesh(preset["r"], preset["s"], preset["resolution"]), csv_path)
    elif kind == "p_sweep":
        write_table(csv_path, *_p_sweep(preset))
    elif kind == "p_plane":
        write_table(csv_path, *_p_plane(preset))
    else:
        traj = trajectory_for(preset)
        wtraj = evolve(_family_spec(preset["family"]), traj)
        write_trajectory_csv(csv_path, wtraj)
        manifest["frame"] = traj.frame
        manifest["solver"] = {k: v for k, v in traj.info.items() if k != "history"}
        manifest["witness"] = witness_summary(wtraj)

    manifest_path = outdir / f"fig{fig_id}.manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return csv_path, manifest_path
