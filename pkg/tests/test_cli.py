import json
import subprocess
import sys

import pytest

from distgeo.cli import main

SPHERE = {
    "manifold": "sphere3",
    "distribution": [1, 2],
    "connection": {"kind": "ssm", "U": ["1", "0", "1"]},
    "checks": ["gauss", "codazzi", "ricci", "golden"],
}


def _write(tmp_path, data, name="s.json"):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(path)


def _run(tmp_path, data, *extra):
    out = tmp_path / "report.json"
    code = main(["run", _write(tmp_path, data), "--out", str(out), *extra])
    report = json.loads(out.read_text()) if out.exists() else None
    return code, report


def test_sphere_scenario_passes_with_ledger(tmp_path):
    code, report = _run(tmp_path, SPHERE)
    assert code == 0
    assert set(report) == {"scenario", "checks", "golden", "summary", "timing_ms"}
    row = next(g for g in report["golden"] if g["key"] == "R_D[SSM](X1,X2,X1) D={X1,X2}")
    assert row["match"] and row["engine_value"] == [0.0, -4.0, 0.0]
    assert row["paper_eq"] == "Eq 5.7"


def test_strict_golden_makes_mismatch_fatal(tmp_path):
    code, report = _run(tmp_path, SPHERE, "--strict-golden")
    assert code == 1
    assert report["summary"]["golden_mismatches"] > 0


def test_einstein_scenario(tmp_path):
    data = {"manifold": "warped-sphere", "f": "2*t+1", "distribution": [1, 2, 3], "c0": 0, "checks": ["einstein"]}
    code, report = _run(tmp_path, data)
    assert code == 0 and report["checks"][0]["pass"]


def test_inline_manifold(tmp_path):
    data = {
        "manifold": {"names": ["A", "B", "C"], "metric": ["1", "1", "1"], "brackets": {"1,2": {"3": "1"}},
                     "weights": ["0", "0", "0"]},
        "distribution": [1, 2],
        "connection": {"kind": "stat", "K": {"1,1,1": "1"}},
        "checks": ["gauss", "codazzi", "ricci", "reduction"],
    }
    code, report = _run(tmp_path, data)
    assert code == 0, report


def test_malformed_expression_exit_2(tmp_path, capsys):
    bad = dict(SPHERE, connection={"kind": "ssm", "U": ["2**t", "0", "1"]})
    code, _ = _run(tmp_path, bad)
    assert code == 2
    assert "byte 1" in capsys.readouterr().err


@pytest.mark.parametrize(
    "data",
    [
        "{not json",
        {**SPHERE, "colour": "red"},
        {**SPHERE, "checks": ["gauss", "vibes"]},
        {**SPHERE, "manifold": "torus"},
        {**SPHERE, "distribution": [1, 2, 3]},
        {**SPHERE, "connection": {"kind": "stat", "K": {"1,1,3": "1"}}},
        {**SPHERE, "connection": {"kind": "ssm", "U": ["1"]}},
        {"manifold": "warped-sphere", "f": "t-0.6", "distribution": [1], "checks": []},
    ],
    ids=["json", "unknown-key", "unknown-check", "preset", "full-rank", "asymmetric-K", "short-U", "zero-warp"],
)
def test_input_errors_exit_2(tmp_path, data):
    code, report = _run(tmp_path, data)
    assert code == 2 and report is None


def test_missing_file_exit_2(tmp_path):
    assert main(["run", str(tmp_path / "nope.json")]) == 2


def test_domain_error_inside_check_exit_1(tmp_path):
    data = {**SPHERE, "checks": ["gauss", "chen_first"], "declared_c": 1}
    code, report = _run(tmp_path, data)
    assert code == 1
    err = report["checks"][1]
    assert err["at"] == "checks[1]" and "DimensionTooSmall" in err["error"]


def test_chen_ricci_scenario(tmp_path):
    data = {**SPHERE, "checks": ["chen_ricci"], "declared_c": 1, "X": 1}
    code, report = _run(tmp_path, data)
    assert code == 0 and report["checks"][0]["pass"]


def test_catalog_lists_presets_and_families(capsys):
    assert main(["catalog"]) == 0
    out = capsys.readouterr().out
    assert "sphere3 (Example 1, Eq 5.1)" in out
    assert "thm5.5/1 (λ₀ = −2/3)" in out


def test_bad_arguments_exit_2():
    assert main(["frobnicate"]) == 2


def test_reports_are_deterministic(tmp_path):
    first = _run(tmp_path, SPHERE)[1]
    second = _run(tmp_path, SPHERE)[1]
    first.pop("timing_ms"), second.pop("timing_ms")
    assert first == second


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "distgeo", "catalog"], capture_output=True, text=True)
    assert proc.returncode == 0 and "warped-heisenberg" in proc.stdout


@pytest.mark.parametrize("name", ["sphere3_ssm", "warped_einstein", "heisenberg_stat"])
def test_shipped_scenarios_pass(tmp_path, name):
    from pathlib import Path

    path = Path(__file__).parent.parent / "scenarios" / f"{name}.json"
    assert main(["run", str(path), "--out", str(tmp_path / "r.json")]) == 0
