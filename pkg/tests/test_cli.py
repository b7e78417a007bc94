import json

import numpy as np
import pytest

from greybox_stability import io as gio
from greybox_stability.cli import (
    AnalysisConfig,
    config_doc,
    device_doc,
    device_from_doc,
    main,
)
from greybox_stability.errors import ConfigError
from greybox_stability.fixtures import demo_config_path
from greybox_stability.sweep import FrequencyPlan, table_from_model
from greybox_stability.synthetic import SUITE_PLAN


@pytest.fixture(scope="module")
def demo_stable():
    return str(demo_config_path("stable"))


@pytest.fixture(scope="module")
def demo_unstable():
    return str(demo_config_path("unstable"))


def write_config(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_config_roundtrip(tmp_path, suite):
    system = suite[0]
    doc = config_doc(system.grid, SUITE_PLAN, device=system.device)
    config = AnalysisConfig.from_file(write_config(tmp_path, doc))
    assert config.grid == system.grid
    assert config.plan == SUITE_PLAN
    rebuilt = device_from_doc(device_doc(system.device))
    assert rebuilt.e11.num == system.device.e11.num


def test_config_rejects_bad_schema(tmp_path):
    with pytest.raises(ConfigError):
        AnalysisConfig.from_file(write_config(tmp_path, {"schema_version": 99}))
    with pytest.raises(ConfigError):
        AnalysisConfig.from_file(write_config(tmp_path, {"schema_version": 1}))
    with pytest.raises(ConfigError):
        AnalysisConfig.from_file(str(tmp_path / "missing.json"))


def test_config_rejects_missing_scenario_table(tmp_path, suite):
    doc = config_doc(suite[0].grid, SUITE_PLAN)
    doc["scenarios"] = [{"name": "x", "table": "nowhere.csv"}]
    with pytest.raises(ConfigError):
        AnalysisConfig.from_file(write_config(tmp_path, doc))


def test_sweep_and_analyze_stable(tmp_path, demo_stable):
    out = tmp_path / "table.csv"
    assert main(["sweep", "--config", demo_stable, "--output", str(out)]) == 0
    assert out.exists()
    code = main(
        [
            "analyze", "--config", demo_stable, "--table", str(out),
            "--report", str(tmp_path / "report.json"),
            "--export-trajectory", str(tmp_path / "traj.csv"),
            "--export-idta", str(tmp_path / "idta.json"),
        ]
    )
    assert code == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["verdict"] == "stable"
    assert (tmp_path / "traj.csv").exists() and (tmp_path / "idta.json").exists()


def test_analyze_unstable_exit_code(tmp_path, demo_unstable):
    out = tmp_path / "table.csv"
    assert main(["sweep", "--config", demo_unstable, "--output", str(out)]) == 0
    assert main(["analyze", "--config", demo_unstable, "--table", str(out)]) == 10


def test_sweep_deterministic_files(tmp_path, demo_stable):
    doc = json.loads(open(demo_stable).read())
    doc["noise"] = {"level": 0.01, "seed": 7}
    cfg = write_config(tmp_path, doc)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["sweep", "--config", cfg, "--output", str(a)]) == 0
    assert main(["sweep", "--config", cfg, "--output", str(b)]) == 0
    assert a.read_text() == b.read_text()


def test_sweep_missing_device_exits_2(tmp_path, suite):
    doc = config_doc(suite[0].grid, SUITE_PLAN)
    cfg = write_config(tmp_path, doc)
    assert main(["sweep", "--config", cfg, "--output", str(tmp_path / "x.csv")]) == 2


def test_analyze_malformed_table_exits_3(tmp_path, demo_stable):
    bad = tmp_path / "bad.csv"
    bad.write_text("f_hz,re_y11\n1,2\n")
    assert main(["analyze", "--config", demo_stable, "--table", str(bad)]) == 3


def test_analyze_truncated_table_exits_3(tmp_path, demo_stable):
    bad = tmp_path / "tiny.csv"
    header = ",".join(gio.TABLE_CSV_COLUMNS)
    bad.write_text(header + "\n1.0,1,0,0,0,0,0,1,0\n2.0,1,0\n")
    assert main(["analyze", "--config", demo_stable, "--table", str(bad)]) == 3


def test_verify_demo_agrees(tmp_path, demo_stable):
    report = tmp_path / "verify.json"
    assert main(["verify", "--config", demo_stable, "--report", str(report)]) == 0
    doc = json.loads(report.read_text())
    assert doc["agreement"] is True
    assert doc["apsam_winding"] == doc["gnc_winding"] == doc["oracle_count"] == 0
    assert doc["timings"]["apsam_seconds"] < doc["timings"]["gnc_seconds"]


def test_verify_needs_device(tmp_path, suite):
    doc = config_doc(suite[0].grid, SUITE_PLAN)
    cfg = write_config(tmp_path, doc)
    assert main(["verify", "--config", cfg]) == 2


def test_intervals_demo(tmp_path):
    cfg = str(demo_config_path("near_critical"))
    report = tmp_path / "intervals.json"
    assert main(["intervals", "--config", cfg, "--report", str(report)]) == 0
    rows = json.loads(report.read_text())["rows"]
    errs = [r["abs_error"] for r in rows if "abs_error" in r]
    assert len(errs) == 3
    assert errs[0] > errs[1] >= errs[2]


def test_intervals_single_step(tmp_path):
    cfg = str(demo_config_path("near_critical"))
    assert main(["intervals", "--config", cfg, "--steps", "1"]) == 0


def test_batch_wind_demo(tmp_path):
    cfg = str(demo_config_path("batch_wind"))
    report = tmp_path / "batch.json"
    assert main(["batch", "--config", cfg, "--report", str(report)]) == 0
    rows = json.loads(report.read_text())["scenarios"]
    verdicts = [r["verdict"] for r in rows]
    assert verdicts.count("stable") == 3 and verdicts.count("unstable") == 2
    sigmas = [r["sigma_o"] for r in rows]
    assert sigmas == sorted(sigmas)  # v12 best .. v4 worst


def test_batch_capacitor_demo():
    cfg = str(demo_config_path("experiment_cs"))
    assert main(["batch", "--config", cfg]) == 0


def test_batch_empty_scenarios(tmp_path, suite):
    doc = config_doc(suite[0].grid, SUITE_PLAN, device=suite[0].device)
    cfg = write_config(tmp_path, doc)
    assert main(["batch", "--config", cfg]) == 2


def test_batch_continues_past_corrupt_scenario(tmp_path, suite):
    wind = [s for s in suite if s.rhp_count == 0][:2]
    doc = config_doc(
        wind[0].grid,
        FrequencyPlan(bands=((-200.0, 200.0, 2.0),)),
        scenarios=tuple((s.name, s.device, None) for s in wind),
    )
    doc["scenarios"].append({"name": "corrupt", "table": "table.csv"})
    # create the referenced table, then corrupt it
    table_path = tmp_path / "table.csv"
    table_path.write_text("not,a,table\n")
    cfg = write_config(tmp_path, doc)
    report = tmp_path / "batch.json"
    assert main(["batch", "--config", cfg, "--report", str(report)]) == 0
    rows = json.loads(report.read_text())["scenarios"]
    assert sum(1 for r in rows if "error" in r) == 1
    assert sum(1 for r in rows if "verdict" in r) == 2


def test_batch_all_failing_exits_7(tmp_path, suite):
    table_path = tmp_path / "broken.csv"
    table_path.write_text("junk\n")
    doc = config_doc(suite[0].grid, SUITE_PLAN)
    doc["scenarios"] = [{"name": "only", "table": "broken.csv"}]
    cfg = write_config(tmp_path, doc)
    assert main(["batch", "--config", cfg]) == 7


def test_bench_command():
    assert main(["bench", "--points", "300", "--repeats", "1"]) == 0


def test_analyze_from_scenario_table_roundtrip(tmp_path, suite, demo_stable):
    # analyzing a table written by sweep gives the same verdict as in-memory
    system = suite[6]
    plan = FrequencyPlan(bands=((-500.0, 500.0, 1.0),))
    doc = config_doc(system.grid, plan, device=system.device)
    cfg = write_config(tmp_path, doc)
    out = tmp_path / "t.json"
    assert main(["sweep", "--config", cfg, "--output", str(out), "--format", "json"]) == 0
    code = main(["analyze", "--config", cfg, "--table", str(out)])
    from greybox_stability.analysis import analyze_table

    outcome = analyze_table(system.grid, table_from_model(system.device, plan))
    assert code == outcome.exit_code
