"""Command-line front end: sweep, analyze, verify, intervals, batch, bench.

Exit codes: 0 stable/ok, 10 unstable, 11 marginal; 2 configuration errors,
3 sweep/table errors, 4 unresolvable crossing sequence, 5 verification
disagreement, 6 interval-study monotonicity failure, 7 all batch scenarios
failed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import io as gio
from . import kernels
from .analysis import AnalysisOutcome, analyze_table
from .errors import (
    ConfigError,
    ConsistencyViolation,
    NonAdjacentSequence,
    StabilityAnalysisError,
)
from .models import (
    TWO_PI,
    GridParams,
    RationalFunction,
    RationalMatrix2,
    hz_to_rad,
)
from .sweep import DEFAULT_PLAN, FrequencyPlan, FrequencyResponseTable
from .sweep import sweep as run_sweep
from .sweep import table_from_model
from .trajectory import INTERP_METHODS, PIECEWISE_LINEAR, return_ratio_array
from .verify import (
    consistency_check,
    eigen_loci,
    gnc_verdict,
    oracle_rhp_zeros,
    performance_comparison,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SWEEP = 3
EXIT_TABLE = 3
EXIT_SEQUENCE = 4
EXIT_DISAGREEMENT = 5
EXIT_NON_MONOTONE = 6
EXIT_ALL_FAILED = 7
EXIT_UNSTABLE = 10
EXIT_MARGINAL = 11

SCHEMA_VERSION = 1


def _complex_list(values) -> tuple[complex, ...]:
    out = []
    for v in values:
        if isinstance(v, (int, float)):
            out.append(complex(v))
        else:
            out.append(complex(float(v[0]), float(v[1])))
    return tuple(out)


def _coeff_doc(coeffs) -> list:
    return [[c.real, c.imag] for c in coeffs]


def rational_from_doc(doc) -> RationalFunction:
    return RationalFunction(_complex_list(doc["num"]), _complex_list(doc["den"]))


def rational_doc(f: RationalFunction) -> dict:
    return {"num": _coeff_doc(f.num), "den": _coeff_doc(f.den)}


def device_from_doc(doc) -> RationalMatrix2:
    try:
        return RationalMatrix2(
            rational_from_doc(doc["y11"]),
            rational_from_doc(doc["y12"]),
            rational_from_doc(doc["y21"]),
            rational_from_doc(doc["y22"]),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"bad device definition: {exc}") from exc


def device_doc(device: RationalMatrix2) -> dict:
    return {name.replace("e", "y"): rational_doc(f) for name, f in device.entries()}


def grid_from_doc(doc) -> GridParams:
    try:
        if "omega1_rad_s" in doc:
            omega1 = float(doc["omega1_rad_s"])
        else:
            omega1 = hz_to_rad(float(doc["f1_hz"]))
        cs = doc.get("cs")
        return GridParams(
            rs=float(doc["rs"]),
            l_total=float(doc["l_total"]),
            omega1=omega1,
            cs=None if cs is None else float(cs),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"bad grid definition: {exc}") from exc


def grid_doc(grid: GridParams) -> dict:
    return {
        "rs": grid.rs,
        "l_total": grid.l_total,
        "omega1_rad_s": grid.omega1,
        "cs": grid.cs,
    }


def plan_from_doc(doc) -> FrequencyPlan:
    try:
        return FrequencyPlan(
            bands=tuple(tuple(float(v) for v in b) for b in doc["bands"]),
            f1_hz=float(doc.get("f1_hz", 50.0)),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"bad plan definition: {exc}") from exc


def plan_doc(plan: FrequencyPlan) -> dict:
    return {"bands": [list(b) for b in plan.bands], "f1_hz": plan.f1_hz}


@dataclass
class Scenario:
    name: str
    device: RationalMatrix2 | None = None
    table_path: str | None = None
    grid: GridParams | None = None


@dataclass
class AnalysisConfig:
    """Everything one run needs: grid, plan, noise, refinement, scenarios."""

    grid: GridParams
    plan: FrequencyPlan
    noise_level: float = 0.0
    seed: int = 0
    interp_method: str = PIECEWISE_LINEAR
    interp_step_hz: float = 0.1
    tolerances: dict = field(default_factory=dict)
    device: RationalMatrix2 | None = None
    scenarios: tuple[Scenario, ...] = ()

    @classmethod
    def from_doc(cls, doc, base_dir: Path) -> "AnalysisConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config root must be an object")
        version = doc.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema_version {version!r} (expected {SCHEMA_VERSION})")
        if "grid" not in doc:
            raise ConfigError("config is missing the grid section")
        grid = grid_from_doc(doc["grid"])
        plan = plan_from_doc(doc["plan"]) if "plan" in doc else DEFAULT_PLAN
        noise = doc.get("noise", {})
        interp = doc.get("interpolation", {})
        method = interp.get("method", PIECEWISE_LINEAR)
        if method not in INTERP_METHODS:
            raise ConfigError(f"unknown interpolation method {method!r}")
        step_hz = float(interp.get("step_hz", 0.1))
        if step_hz <= 0:
            raise ConfigError("interpolation step_hz must be > 0")
        tolerances = dict(doc.get("tolerances", {}))
        for key, value in tolerances.items():
            if not (float(value) > 0):
                raise ConfigError(f"tolerance {key!r} must be > 0")
        device = device_from_doc(doc["device"]) if doc.get("device") else None
        scenarios = []
        for k, sdoc in enumerate(doc.get("scenarios", ())):
            name = sdoc.get("name", f"scenario-{k}")
            sdevice = device_from_doc(sdoc["device"]) if sdoc.get("device") else None
            table_path = sdoc.get("table")
            if table_path is not None:
                table_path = str((base_dir / table_path).resolve())
                if not Path(table_path).exists():
                    raise ConfigError(f"scenario {name!r}: table {table_path} does not exist")
            if sdevice is None and table_path is None:
                raise ConfigError(f"scenario {name!r} needs a device or a table")
            sgrid = grid_from_doc(sdoc["grid"]) if sdoc.get("grid") else None
            scenarios.append(Scenario(name=name, device=sdevice, table_path=table_path, grid=sgrid))
        return cls(
            grid=grid,
            plan=plan,
            noise_level=float(noise.get("level", 0.0)),
            seed=int(noise.get("seed", 0)),
            interp_method=method,
            interp_step_hz=step_hz,
            tolerances=tolerances,
            device=device,
            scenarios=tuple(scenarios),
        )

    @classmethod
    def from_file(cls, path) -> "AnalysisConfig":
        p = Path(path)
        if not p.exists():
            raise ConfigError(f"config file {p} does not exist")
        try:
            doc = json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {p} is not valid JSON: {exc}") from exc
        return cls.from_doc(doc, p.parent)


def config_doc(
    grid: GridParams,
    plan: FrequencyPlan,
    device: RationalMatrix2 | None = None,
    scenarios: tuple = (),
    noise_level: float = 0.0,
    seed: int = 0,
) -> dict:
    """Assemble a config document (used by the demo generator and tests)."""
    doc = {
        "schema_version": SCHEMA_VERSION,
        "grid": grid_doc(grid),
        "plan": plan_doc(plan),
        "noise": {"level": noise_level, "seed": seed},
        "interpolation": {"method": PIECEWISE_LINEAR, "step_hz": 0.1},
    }
    if device is not None:
        doc["device"] = device_doc(device)
    if scenarios:
        doc["scenarios"] = [
            {
                "name": name,
                "device": device_doc(dev),
                **({"grid": grid_doc(g)} if g is not None else {}),
            }
            for name, dev, g in scenarios
        ]
    return doc


def _print(msg: str) -> None:
    print(msg)


def _verdict_exit(outcome: AnalysisOutcome) -> int:
    if outcome.marginal:
        return EXIT_MARGINAL
    return EXIT_OK if outcome.verdict.stable else EXIT_UNSTABLE


def _describe(outcome: AnalysisOutcome) -> str:
    verdict = "marginal" if outcome.marginal else ("stable" if outcome.verdict.stable else "unstable")
    parts = [f"verdict: {verdict}", f"winding: {outcome.verdict.winding}"]
    est = outcome.estimate
    if est is not None:
        parts.append(
            "critical pole: sigma=%.6g 1/s, omega=%.6g rad/s (%.6g Hz), tau=%s s"
            % (
                est.sigma_o,
                est.omega_o,
                est.omega_o_hz,
                "inf" if est.tau == float("inf") else f"{est.tau:.6g}",
            )
        )
    else:
        parts.append("critical pole: no critical zero (qualitative only)")
    return "; ".join(parts)


def cmd_sweep(args) -> int:
    try:
        config = AnalysisConfig.from_file(args.config)
        if config.device is None:
            raise ConfigError("sweep needs a device in the config")
    except ConfigError as exc:
        _print(f"config error: {exc}")
        return EXIT_CONFIG
    try:
        table = run_sweep(
            config.device, config.plan, noise=config.noise_level, seed=config.seed,
            device_id=Path(args.config).stem,
        )
    except (StabilityAnalysisError, ValueError) as exc:
        _print(f"sweep error: {exc}")
        return EXIT_SWEEP
    out = Path(args.output)
    if args.format == "json" or (args.format == "auto" and out.suffix.lower() == ".json"):
        gio.write_table_json(table, out)
    else:
        gio.write_table_csv(table, out)
    _print(
        f"wrote {len(table)} frequency points to {out} "
        f"(noise={config.noise_level}, seed={config.seed})"
    )
    return EXIT_OK


def _analysis_kwargs(config: AnalysisConfig) -> dict:
    return {
        "interp_method": config.interp_method,
        "refine_step_hz": config.interp_step_hz,
    }


def cmd_analyze(args) -> int:
    try:
        config = AnalysisConfig.from_file(args.config)
    except ConfigError as exc:
        _print(f"config error: {exc}")
        return EXIT_CONFIG
    try:
        table = gio.read_table(args.table)
    except (ValueError, OSError) as exc:
        _print(f"table error: {exc}")
        return EXIT_TABLE
    try:
        outcome = analyze_table(config.grid, table, **_analysis_kwargs(config))
    except NonAdjacentSequence as exc:
        _print(f"crossing sequence unresolvable after refinement retry: {exc}")
        return EXIT_SEQUENCE
    except StabilityAnalysisError as exc:
        _print(f"analysis error: {exc}")
        return EXIT_TABLE
    _print(_describe(outcome))
    for note in outcome.verdict.diagnostics:
        _print(f"note: {note}")
    if args.report:
        gio.write_json(gio.report_doc(outcome), args.report)
        _print(f"report written to {args.report}")
    if args.export_trajectory:
        gio.write_trajectory_csv(outcome.trajectory, args.export_trajectory)
        _print(f"trajectory written to {args.export_trajectory}")
    if args.export_idta:
        gio.write_json(gio.idta_plot_doc(outcome.curve), args.export_idta)
        _print(f"crossing-curve plot data written to {args.export_idta}")
    return _verdict_exit(outcome)


def cmd_verify(args) -> int:
    try:
        config = AnalysisConfig.from_file(args.config)
        if config.device is None:
            raise ConfigError("verify needs a closed-form device in the config")
    except ConfigError as exc:
        _print(f"config error: {exc}")
        return EXIT_CONFIG
    device, grid, plan = config.device, config.grid, config.plan
    report: dict = {"schema_version": SCHEMA_VERSION, "kind": "verification_report"}
    problems: list[str] = []
    try:
        table = table_from_model(device, plan)
        outcome = analyze_table(grid, table, **_analysis_kwargs(config))
        g = return_ratio_array(grid, table.subset(~_singular_mask(grid, table)))
        gnc = gnc_verdict(eigen_loci(g, table.subset(~_singular_mask(grid, table)).omega))
        oracle = oracle_rhp_zeros(device, grid)
        report["apsam_verdict"] = "stable" if outcome.verdict.stable else "unstable"
        report["apsam_winding"] = outcome.verdict.winding
        report["gnc_winding"] = gnc.winding
        report["oracle_count"] = oracle.rhp_zero_count
        if not (outcome.verdict.winding == gnc.winding == oracle.rhp_zero_count):
            problems.append(
                f"winding disagreement: apsam={outcome.verdict.winding} "
                f"gnc={gnc.winding} oracle={oracle.rhp_zero_count}"
            )
        tol = config.tolerances
        try:
            # the impedance-form trajectory carries fine pole/zero structure
            # near the critical zero; compare the two forms on a refined grid
            fine_plan = FrequencyPlan(
                bands=tuple((lo, hi, step / 16.0) for lo, hi, step in plan.bands),
                f1_hz=plan.f1_hz,
            )
            consistency = consistency_check(
                device, grid, fine_plan,
                tol_sigma_rel=float(tol.get("sigma_rel", 0.05)),
                tol_sigma_abs=float(tol.get("sigma_abs", 0.01)),
                tol_omega=float(tol.get("omega_abs", 0.5)),
            )
            report["impedance_form_agrees"] = consistency.agreement
        except ConsistencyViolation as exc:
            report["impedance_form_agrees"] = False
            problems.append(f"impedance-form disagreement: {exc}")
        diag_outcome = analyze_table(grid, table.truncated_to_diagonal(), **_analysis_kwargs(config))
        report["diagonal_truncation_verdict"] = (
            "stable" if diag_outcome.verdict.stable else "unstable"
        )
        report["diagonal_truncation_differs"] = (
            diag_outcome.verdict.stable != outcome.verdict.stable
        )
        comparison = performance_comparison(
            return_ratio_array(grid, table.subset(~_singular_mask(grid, table))),
            table.subset(~_singular_mask(grid, table)).omega,
        )
        report["timings"] = {
            "n_points": comparison.n_points,
            "apsam_seconds": comparison.apsam_seconds,
            "gnc_seconds": comparison.gnc_seconds,
        }
        report["agreement"] = not problems
    except StabilityAnalysisError as exc:
        _print(f"verification error: {exc}")
        return EXIT_DISAGREEMENT
    for key in ("apsam_verdict", "apsam_winding", "gnc_winding", "oracle_count"):
        _print(f"{key}: {report[key]}")
    _print(f"impedance-form agrees: {report['impedance_form_agrees']}")
    _print(
        "diagonal truncation verdict: %s%s"
        % (
            report["diagonal_truncation_verdict"],
            " (differs from full matrix)" if report["diagonal_truncation_differs"] else "",
        )
    )
    _print(
        "timings over %d points: trajectory route %.4g s, eigen-loci route %.4g s"
        % (
            report["timings"]["n_points"],
            report["timings"]["apsam_seconds"],
            report["timings"]["gnc_seconds"],
        )
    )
    if args.report:
        gio.write_json(report, args.report)
    if problems:
        for p in problems:
            _print(f"DISAGREEMENT: {p}")
        return EXIT_DISAGREEMENT
    _print("all checks agree")
    return EXIT_OK


def _singular_mask(grid: GridParams, table: FrequencyResponseTable):
    from .models import grid_singular_mask

    return grid_singular_mask(table.omega, grid)


def cmd_intervals(args) -> int:
    try:
        config = AnalysisConfig.from_file(args.config)
        if config.device is None:
            raise ConfigError("the interval study needs a closed-form device")
        steps = tuple(float(s) for s in args.steps.split(","))
        if not steps or any(s <= 0 for s in steps):
            raise ConfigError(f"bad interval list {args.steps!r}")
    except ConfigError as exc:
        _print(f"config error: {exc}")
        return EXIT_CONFIG
    device, grid = config.device, config.grid
    oracle = oracle_rhp_zeros(device, grid)
    reference = oracle.critical_zero
    if reference is None:
        _print("oracle found no zeros: nothing to study")
        return EXIT_CONFIG
    f_max = max(abs(config.plan.bands[0][0]), abs(config.plan.bands[-1][1]))
    rows = []
    for step in steps:
        bands = ((-f_max, f_max, step),)
        plan = FrequencyPlan(bands=bands, f1_hz=config.plan.f1_hz)
        table = table_from_model(device, plan)
        try:
            outcome = analyze_table(grid, table, **_analysis_kwargs(config))
        except StabilityAnalysisError as exc:
            rows.append({"interval_hz": step, "error": str(exc)})
            continue
        est = outcome.estimate
        if est is None:
            rows.append({"interval_hz": step, "no_candidate": True})
            continue
        rows.append(
            {
                "interval_hz": step,
                "sigma_o": est.sigma_o,
                "omega_o_rad_s": est.omega_o,
                "abs_error": abs(est.zero - reference),
            }
        )
    _print(f"oracle reference zero: {reference.real:.6g} + {reference.imag:.6g}j rad/s")
    for row in rows:
        if "abs_error" in row:
            _print(
                "interval %.3g Hz: sigma=%.6g, omega=%.6g rad/s, |error|=%.6g"
                % (row["interval_hz"], row["sigma_o"], row["omega_o_rad_s"], row["abs_error"])
            )
        else:
            _print(f"interval {row['interval_hz']:.3g} Hz: {row}")
    if args.report:
        gio.write_json(
            {
                "schema_version": SCHEMA_VERSION,
                "kind": "interval_study",
                "reference": [reference.real, reference.imag],
                "rows": rows,
            },
            args.report,
        )
    errors = [row["abs_error"] for row in rows if "abs_error" in row]
    if len(errors) >= 2:
        for a, b in zip(errors, errors[1:]):
            if b > a * 1.05 + 1e-12:
                _print("monotonicity violated: error grew as the interval shrank")
                return EXIT_NON_MONOTONE
    return EXIT_OK


def cmd_batch(args) -> int:
    try:
        config = AnalysisConfig.from_file(args.config)
    except ConfigError as exc:
        _print(f"config error: {exc}")
        return EXIT_CONFIG
    if not config.scenarios:
        _print("config error: batch needs a non-empty scenario list")
        return EXIT_CONFIG
    results = []
    failures = 0
    for scenario in config.scenarios:
        grid = scenario.grid if scenario.grid is not None else config.grid
        try:
            if scenario.device is not None:
                table = run_sweep(
                    scenario.device, config.plan,
                    noise=config.noise_level, seed=config.seed, device_id=scenario.name,
                )
            else:
                table = gio.read_table(scenario.table_path)
            outcome = analyze_table(grid, table, **_analysis_kwargs(config))
        except (StabilityAnalysisError, ValueError, OSError) as exc:
            results.append({"name": scenario.name, "error": f"{type(exc).__name__}: {exc}"})
            failures += 1
            continue
        entry = {
            "name": scenario.name,
            "verdict": "marginal" if outcome.marginal else (
                "stable" if outcome.verdict.stable else "unstable"
            ),
            "winding": outcome.verdict.winding,
        }
        if outcome.estimate is not None:
            entry["sigma_o"] = outcome.estimate.sigma_o
            entry["omega_o_rad_s"] = outcome.estimate.omega_o
            entry["omega_o_hz"] = outcome.estimate.omega_o_hz
        results.append(entry)
    ranked = sorted(
        (r for r in results if "sigma_o" in r), key=lambda r: -r["sigma_o"]
    )
    _print(f"{'scenario':<16} {'verdict':<10} {'winding':>7} {'sigma_o':>12} {'f_o [Hz]':>10}")
    for r in results:
        if "error" in r:
            _print(f"{r['name']:<16} ERROR: {r['error']}")
        else:
            sigma = f"{r['sigma_o']:.4g}" if "sigma_o" in r else "-"
            f_o = f"{r['omega_o_hz']:.4g}" if "omega_o_hz" in r else "-"
            _print(f"{r['name']:<16} {r['verdict']:<10} {r['winding']:>7} {sigma:>12} {f_o:>10}")
    if ranked:
        _print("worst stability first: " + ", ".join(r["name"] for r in ranked))
    if args.report:
        gio.write_json(
            {"schema_version": SCHEMA_VERSION, "kind": "batch_report", "scenarios": results},
            args.report,
        )
    if failures == len(config.scenarios):
        return EXIT_ALL_FAILED
    return EXIT_OK


def cmd_bench(args) -> int:
    from .benchmarks import run_backend_benchmark

    rows = run_backend_benchmark(points=args.points, repeats=args.repeats)
    _print(f"kernel backend in use: {kernels.BACKEND}")
    _print(f"{'kernel':<24} {'backend':<8} {'seconds':>12}")
    for row in rows:
        _print(f"{row['kernel']:<24} {row['backend']:<8} {row['seconds']:>12.6f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="greybox-stability",
        description="Small-signal stability assessment of grey-box 2x2 MIMO feedback systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="simulate the frequency sweep of a device model")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--output", "-o", required=True)
    p_sweep.add_argument("--format", choices=("auto", "csv", "json"), default="auto")
    p_sweep.set_defaults(func=cmd_sweep)

    p_an = sub.add_parser("analyze", help="assess stability from a response table")
    p_an.add_argument("--config", required=True)
    p_an.add_argument("--table", required=True)
    p_an.add_argument("--report")
    p_an.add_argument("--export-trajectory")
    p_an.add_argument("--export-idta")
    p_an.set_defaults(func=cmd_analyze)

    p_ver = sub.add_parser("verify", help="cross-check against the eigen-loci reference and oracle")
    p_ver.add_argument("--config", required=True)
    p_ver.add_argument("--report")
    p_ver.set_defaults(func=cmd_verify)

    p_int = sub.add_parser("intervals", help="critical-pole error vs sweep interval study")
    p_int.add_argument("--config", required=True)
    p_int.add_argument("--steps", default="2,1,0.5")
    p_int.add_argument("--report")
    p_int.set_defaults(func=cmd_intervals)

    p_bat = sub.add_parser("batch", help="assess a list of scenarios")
    p_bat.add_argument("--config", required=True)
    p_bat.add_argument("--report")
    p_bat.set_defaults(func=cmd_batch)

    p_ben = sub.add_parser("bench", help="compare compiled and pure-python kernel backends")
    p_ben.add_argument("--points", type=int, default=5000)
    p_ben.add_argument("--repeats", type=int, default=5)
    p_ben.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
