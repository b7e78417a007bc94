"""Flat-file formats: response tables (CSV/JSON), trajectory and plot exports.

Floats are written with 17 significant digits so both formats round-trip
bit-exactly.  The table's canonical frequency axis is Hz; angular frequencies
are derived on load, never stored.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .analysis import AnalysisOutcome
from .idta import IdtaCurve, stable_region
from .sweep import FrequencyPlan, FrequencyResponseTable
from .trajectory import Crossing, DeterminantTrajectory
from .verify import EigenLoci

TABLE_CSV_COLUMNS = (
    "f_hz",
    "re_y11", "im_y11", "re_y12", "im_y12",
    "re_y21", "im_y21", "re_y22", "im_y22",
)

SCHEMA_VERSION = 1


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_table_csv(table: FrequencyResponseTable, path) -> None:
    lines = [",".join(TABLE_CSV_COLUMNS)]
    for k in range(len(table)):
        row = [table.f_hz[k]]
        for i in (0, 1):
            for j in (0, 1):
                row.append(table.y[k, i, j].real)
                row.append(table.y[k, i, j].imag)
        lines.append(",".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_table_csv(path) -> FrequencyResponseTable:
    text = Path(path).read_text().strip()
    if not text:
        raise ValueError(f"{path}: empty table file")
    lines = text.splitlines()
    header = [h.strip() for h in lines[0].split(",")]
    if tuple(header) != TABLE_CSV_COLUMNS:
        raise ValueError(f"{path}: unexpected header {header!r}")
    rows = []
    for ln, line in enumerate(lines[1:], start=2):
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != len(TABLE_CSV_COLUMNS):
            raise ValueError(f"{path}:{ln}: expected {len(TABLE_CSV_COLUMNS)} columns")
        rows.append([float(p) for p in parts])
    data = np.asarray(rows, dtype=float)
    y = np.empty((data.shape[0], 2, 2), dtype=np.complex128)
    col = 1
    for i in (0, 1):
        for j in (0, 1):
            y[:, i, j] = data[:, col] + 1j * data[:, col + 1]
            col += 2
    return FrequencyResponseTable(f_hz=data[:, 0], y=y)


def _plan_doc(plan: FrequencyPlan | None):
    if plan is None:
        return None
    return {"bands": [list(b) for b in plan.bands], "f1_hz": plan.f1_hz}


def _plan_from_doc(doc) -> FrequencyPlan | None:
    if doc is None:
        return None
    return FrequencyPlan(
        bands=tuple(tuple(float(v) for v in b) for b in doc["bands"]),
        f1_hz=float(doc["f1_hz"]),
    )


def write_table_json(table: FrequencyResponseTable, path) -> None:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "frequency_response_table",
        "metadata": {
            "noise_level": table.noise_level,
            "seed": table.seed,
            "plan": _plan_doc(table.plan),
            "device_id": table.device_id,
        },
        "f_hz": [float(v) for v in table.f_hz],
        "y": {
            f"y{i + 1}{j + 1}": [[float(v.real), float(v.imag)] for v in table.y[:, i, j]]
            for i in (0, 1)
            for j in (0, 1)
        },
    }
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def read_table_json(path) -> FrequencyResponseTable:
    doc = json.loads(Path(path).read_text())
    if doc.get("kind") != "frequency_response_table":
        raise ValueError(f"{path}: not a frequency response table document")
    f = np.asarray(doc["f_hz"], dtype=float)
    y = np.empty((f.shape[0], 2, 2), dtype=np.complex128)
    for i in (0, 1):
        for j in (0, 1):
            pairs = np.asarray(doc["y"][f"y{i + 1}{j + 1}"], dtype=float)
            y[:, i, j] = pairs[:, 0] + 1j * pairs[:, 1]
    meta = doc.get("metadata", {})
    return FrequencyResponseTable(
        f_hz=f,
        y=y,
        noise_level=float(meta.get("noise_level") or 0.0),
        seed=meta.get("seed"),
        plan=_plan_from_doc(meta.get("plan")),
        device_id=meta.get("device_id"),
    )


def read_table(path) -> FrequencyResponseTable:
    p = Path(path)
    if p.suffix.lower() == ".json":
        return read_table_json(p)
    return read_table_csv(p)


def write_trajectory_csv(traj: DeterminantTrajectory, path) -> None:
    lines = ["omega_rad_s,re,im"]
    for k in range(len(traj)):
        lines.append(f"{_fmt(traj.omega[k])},{_fmt(traj.re[k])},{_fmt(traj.im[k])}")
    Path(path).write_text("\n".join(lines) + "\n")


def trajectory_plot_doc(traj: DeterminantTrajectory, crossings=()) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "determinant_trajectory",
        "form": traj.form,
        "omega_rad_s": [float(v) for v in traj.omega],
        "re": [float(v) for v in traj.re],
        "im": [float(v) for v in traj.im],
        "crossings": [_crossing_doc(c) for c in crossings],
    }


def _crossing_doc(c: Crossing) -> dict:
    return {
        "omega_cross_rad_s": c.omega_cross,
        "kind": int(c.kind),
        "on_axis_value": c.on_axis_value,
        "origin_pass": c.origin_pass,
        "ambiguous": c.ambiguous,
    }


def idta_plot_doc(curve: IdtaCurve) -> dict:
    """Plot data sufficient to redraw the crossing-sequence diagram."""
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "idta_curve",
        "points": [
            {
                "seq": p.seq,
                "kind": int(p.kind),
                "extended_coordinate": p.coordinate,
                "omega_cross_rad_s": p.omega_cross,
            }
            for p in curve.points
        ],
    }
    if curve.points:
        doc["stable_region"] = list(stable_region(curve.first_kind))
    return doc


def gnc_plot_doc(loci: EigenLoci) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "gnc_loci",
        "omega_rad_s": [float(v) for v in loci.omega],
        "lambda1": [[float(v.real), float(v.imag)] for v in loci.lam1],
        "lambda2": [[float(v.real), float(v.imag)] for v in loci.lam2],
    }


def report_doc(outcome: AnalysisOutcome) -> dict:
    """The machine-readable analysis report (dual frequency units throughout)."""
    est = outcome.estimate
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "stability_report",
        "verdict": "marginal" if outcome.marginal else ("stable" if outcome.verdict.stable else "unstable"),
        "winding": outcome.verdict.winding,
        "crossing_count": len(outcome.crossings),
        "diagnostics": list(outcome.verdict.diagnostics),
        "trajectory_form": outcome.trajectory.form,
    }
    if est is not None:
        doc["critical_pole"] = {
            "sigma_o": est.sigma_o,
            "omega_o_rad_s": est.omega_o,
            "omega_o_hz": est.omega_o_hz,
            "tau_s": None if est.tau == float("inf") else est.tau,
            "a": est.a,
            "b": est.b,
            "omega_star_rad_s": est.omega_star,
            "omega_star_hz": est.omega_star / (2.0 * np.pi),
            "method": est.method,
            "refine_step_hz": est.refine_step_hz,
        }
    else:
        doc["critical_pole"] = None
        doc["no_critical_zero"] = outcome.no_candidate
    return doc


def write_json(doc: dict, path) -> None:
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")
