"""End-to-end command line tests via subprocess."""

from __future__ import annotations

import json
import os
import subprocess
import sys


def run_cli(*args, env_extra=None, cwd=None):
    env = dict(os.environ)
    env.pop("POWERPROG_WORKERS", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "powerprog.cli", *args],
        capture_output=True,
        text=True,
        env=env,
        cwd=cwd,
    )


def test_usage_errors_exit_2():
    assert run_cli().returncode == 2
    assert run_cli("frobnicate").returncode == 2
    assert run_cli("patterns", "--alphabet", "27", "--length", "4").returncode == 2
    # in-range flags, out-of-contract value: guard turns it into usage
    bad = run_cli("curves", "--scan", "C1", "--height", "99999")
    assert bad.returncode == 2
    assert "error:" in bad.stderr


def test_identities_subcommand():
    proc = run_cli("identities")
    assert proc.returncode == 0
    assert "pink-tengely: holds" in proc.stdout
    as_json = run_cli("identities", "--json")
    payload = json.loads(as_json.stdout)
    assert all(entry["status"] == "holds" for entry in payload)


def test_patterns_subcommand():
    proc = run_cli(
        "patterns", "--alphabet", "25", "--length", "4", "--json"
    )
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["alphabet"] == "25"
    assert payload["length"] == 4
    assert payload["survivors"] == ["2,2,2,5", "5,2,2,2"]
    assert len(payload["pruned"]) == 14
    for cert in payload["pruned"]:
        assert {"pattern", "rule", "positions", "citation"} <= set(cert)


def test_patterns_nmin_flag():
    proc = run_cli(
        "patterns",
        "--alphabet", "2n",
        "--length", "6",
        "--nmin", "5",
        "--json",
    )
    payload = json.loads(proc.stdout)
    assert payload["nmin"] == 5
    assert payload["survivors"] == [
        "2,2,2,n,n,2",
        "2,n,2,2,n,2",
        "2,n,n,2,2,2",
    ]


def test_search_streams_records():
    proc = run_cli(
        "search", "--alphabet", "25", "--bound", "10000", "--json"
    )
    assert proc.returncode == 0
    records = [json.loads(line) for line in proc.stdout.splitlines()]
    assert len(records) == 18
    sporadic = next(r for r in records if r["first"] == 9)
    assert sporadic == {
        "diff": 3116,
        "first": 9,
        "length": 3,
        "patterns": [["2", "5", "2"]],
        "terms": [9, 3125, 6241],
        "trivial_positions": [],
    }
    # symbolic alphabet requires a concrete prime
    assert run_cli("search", "--alphabet", "2n", "--bound", "100").returncode == 2
    ok = run_cli(
        "search", "--alphabet", "2n", "--n", "7", "--bound", "100", "--json"
    )
    assert ok.returncode == 0


def test_curves_subcommand():
    proc = run_cli(
        "curves", "--scan", "C2", "--height", "20", "--json"
    )
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["curve"] == "C2"
    assert payload["evidence_level"] == "verified"
    assert payload["points"] == [
        {"X": "1", "Y": ["1", "0", "0", "0", "0"]}
    ]
    # a height too small to reach X = -1/3 downgrades the evidence label
    shallow = json.loads(
        run_cli("curves", "--scan", "C1", "--height", "2", "--json").stdout
    )
    assert shallow["evidence_level"] == "scan"
    assert [p["X"] for p in shallow["points"]] == ["1"]


def test_torsion_subcommand():
    proc = run_cli("torsion", "--family", "145", "--json")
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["model"]["substitution"] == "u = 20*X, v = 20*Y"
    assert len(payload["points"]) == 8
    assert all(
        not entry["progression"]["accepted"] for entry in payload["points"]
    )
    orders = sorted(entry["order"] for entry in payload["points"])
    assert orders == [1, 2, 2, 2, 4, 4, 4, 4]


def test_report_subcommand(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(
        json.dumps(
            {"search_bound": 10000, "scan_height": 40, "point_height": 100}
        )
    )
    out = tmp_path / "out"
    proc = run_cli(
        "report", "--config", str(config), "--out", str(out)
    )
    assert proc.returncode == 0
    document = json.loads(proc.stdout)
    assert document["summary"]["status"] == "pass"
    assert (out / "report.json").read_text() == proc.stdout
    assert (out / "report.md").exists()
    tsv = (out / "claims.tsv").read_text().strip().splitlines()
    assert tsv[0] == "claim\tstatus\tevidence\tnotes"
    assert len(tsv) == 1 + len(document["claims"])
    figures = sorted(p.name for p in (out / "figures").iterdir())
    assert figures == [
        "admissible-survivors.png",
        "mod9-cases.png",
        "power-progressions.png",
        "torsion-curves.png",
    ]

    # flag overrides beat the file; worker counts don't change the bytes
    rerun = run_cli(
        "report",
        "--config", str(config),
        "--out", str(tmp_path / "out2"),
        env_extra={"POWERPROG_WORKERS": "2"},
    )
    assert rerun.returncode == 0
    assert rerun.stdout == proc.stdout

    markdown = run_cli(
        "report",
        "--config", str(config),
        "--out", str(tmp_path / "out3"),
        "--format", "markdown",
    )
    assert markdown.stdout.startswith("# Verification report")


def test_report_tamper_demo_fails(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(
        json.dumps(
            {"search_bound": 10000, "scan_height": 40, "point_height": 100}
        )
    )
    proc = run_cli(
        "report",
        "--config", str(config),
        "--out", str(tmp_path / "out"),
        "--tamper-rule", "rel-nn2-3z2",
        "--tamper-min-exponent", "5",
        "--no-figures",
    )
    assert proc.returncode == 1
    assert '"failed_claim": "bound-frontier-2n"' in proc.stderr
    document = json.loads(proc.stdout)
    assert document["summary"]["status"] == "fail"
    assert not (tmp_path / "out" / "figures").exists()
    assert (tmp_path / "out" / "report.json").exists()


def test_report_rejects_bad_config(tmp_path):
    config = tmp_path / "config.json"
    config.write_text('{"unknown_knob": 3}')
    proc = run_cli(
        "report", "--config", str(config), "--out", str(tmp_path / "out")
    )
    assert proc.returncode == 2
    assert "unknown config keys" in proc.stderr
