"""Figure rendering: files appear, degrade gracefully on missing data."""

from __future__ import annotations

from powerprog.plots import render_figures
from powerprog.report import RunConfig, run_report

EXPECTED_NAMES = [
    "admissible-survivors.png",
    "power-progressions.png",
    "torsion-curves.png",
    "mod9-cases.png",
]


def test_render_figures_from_report(tmp_path):
    _, doc = run_report(
        RunConfig(search_bound=10**4, scan_height=40, point_height=100)
    )
    paths = render_figures(doc, tmp_path / "figs")
    assert [p.name for p in paths] == EXPECTED_NAMES
    for p in paths:
        assert p.stat().st_size > 1000


def test_render_figures_skips_missing_claims(tmp_path):
    doc = {"claims": []}
    assert render_figures(doc, tmp_path) == []

    _, full = run_report(
        RunConfig(search_bound=10**4, scan_height=40, point_height=100)
    )
    partial = {
        "claims": [c for c in full["claims"] if c["id"] == "residue-mod9"]
    }
    paths = render_figures(partial, tmp_path)
    assert [p.name for p in paths] == ["mod9-cases.png"]
