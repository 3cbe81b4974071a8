"""Figure rendering for report runs.

Figures are a presentation layer over the report document: each one reads
the artifacts of a claim and draws what the numbers already say.  All
rendering goes through the Agg backend so runs work headless.
"""

from __future__ import annotations

import re
from pathlib import Path

import matplotlib as mpl

mpl.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  backend must be set first

from .curves import family_curve  # noqa: E402

_ALPHABET_TITLES = {
    "2n": "squares and n-th powers (n >= 7)",
    "25": "squares and fifth powers",
    "3n": "cubes and n-th powers (n >= 5)",
}


def _claim_artifacts(document: dict, claim_id: str) -> dict | None:
    for claim in document.get("claims", []):
        if claim.get("id") == claim_id:
            return claim.get("artifacts")
    return None


def figure_survivors(document: dict, path: Path) -> bool:
    """Bar chart: admissible pattern counts by length for each alphabet."""
    series = []
    for name in ("2n", "25", "3n"):
        artifacts = _claim_artifacts(document, f"patterns-{name}")
        if artifacts is None:
            continue
        by_length = artifacts["survivors_by_length"]
        lengths = sorted(int(t) for t in by_length)
        counts = [len(by_length[str(t)]) for t in lengths]
        series.append((name, lengths, counts))
    if not series:
        return False
    fig, axes = plt.subplots(1, len(series), figsize=(4 * len(series), 3.2))
    if len(series) == 1:
        axes = [axes]
    for ax, (name, lengths, counts) in zip(axes, series):
        ax.bar(lengths, counts, color="#4878a8")
        for t, c in zip(lengths, counts):
            ax.text(t, c, str(c), ha="center", va="bottom", fontsize=8)
        ax.set_title(_ALPHABET_TITLES[name], fontsize=9)
        ax.set_xlabel("pattern length")
        ax.set_ylabel("admissible patterns")
        ax.set_xticks(lengths)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return True


def figure_progressions(document: dict, path: Path) -> bool:
    """Scatter of every progression found by the bounded mixed search."""
    artifacts = _claim_artifacts(document, "search-25")
    if artifacts is None or not artifacts.get("progressions"):
        return False
    records = artifacts["progressions"]
    firsts = [r["first"] for r in records]
    diffs = [r["diff"] for r in records]
    trivial = [bool(r["trivial_positions"]) for r in records]
    fig, ax = plt.subplots(figsize=(6, 4))
    for flag, color, label in (
        (False, "#c44e52", "fully non-trivial"),
        (True, "#4878a8", "contains -1, 0 or 1"),
    ):
        xs = [f for f, t in zip(firsts, trivial) if t == flag]
        ys = [d for d, t in zip(diffs, trivial) if t == flag]
        ax.scatter(xs, ys, s=14, color=color, label=label, alpha=0.75)
    ax.set_xscale("symlog")
    ax.set_yscale("symlog")
    ax.set_xlabel("first term")
    ax.set_ylabel("common difference")
    ax.set_title(
        f"maximal square/fifth-power progressions below "
        f"{artifacts['bound']}",
        fontsize=9,
    )
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return True


def figure_torsion_curves(document: dict, path: Path) -> bool:
    """The two window curves with their torsion points marked."""
    panels = []
    for family, positions in (("134", (0, 1, 3, 4)), ("145", (0, 1, 4, 5))):
        artifacts = _claim_artifacts(document, f"torsion-{family}")
        if artifacts is None:
            continue
        points = [
            (p["u"], p["v"])
            for p in artifacts["points"]
            if "u" in p
        ]
        panels.append((family, family_curve(positions), points))
    if not panels:
        return False
    fig, axes = plt.subplots(1, len(panels), figsize=(5 * len(panels), 4))
    if len(panels) == 1:
        axes = [axes]
    for ax, (family, curve, points) in zip(axes, panels):
        lo = min(u for u, _ in points) - 4
        hi = max(u for u, _ in points) + 4
        us, vs_pos, vs_neg = [], [], []
        steps = 600
        for i in range(steps + 1):
            u = lo + (hi - lo) * i / steps
            rhs = u**3 + curve.A * u**2 + curve.B * u + curve.C
            if rhs >= 0:
                us.append(u)
                vs_pos.append(rhs**0.5)
                vs_neg.append(-(rhs**0.5))
        ax.plot(us, vs_pos, color="#888888", lw=1)
        ax.plot(us, vs_neg, color="#888888", lw=1)
        ax.scatter(
            [u for u, _ in points],
            [v for _, v in points],
            color="#c44e52",
            zorder=3,
            s=24,
        )
        ax.axhline(0, color="#cccccc", lw=0.5)
        ax.set_title(
            f"v^2 = u^3 + {curve.A}u^2 + {curve.B}u + {curve.C}",
            fontsize=9,
        )
        ax.set_xlabel("u")
        ax.set_ylabel("v")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return True


_CASE_RE = re.compile(r"a1=(\d+) d=(\d+): (.*)")


def figure_mod9_grid(document: dict, path: Path) -> bool:
    """9 x 9 grid of which constraint kills each (a1, d) pair mod 9."""
    artifacts = _claim_artifacts(document, "residue-mod9")
    if artifacts is None:
        return False
    case = artifacts["cases"].get("3,n,3,3")
    if not case or not case.get("transcript"):
        return False
    grid = [[0] * 9 for _ in range(9)]
    for line in case["transcript"]:
        match = _CASE_RE.match(line)
        if match is None:
            return False
        a1, d, reason = int(match.group(1)), int(match.group(2)), match.group(3)
        if "primitivity" in reason:
            code = 1
        else:
            pos = re.search(r"position (\d+)", reason)
            code = 2 + (int(pos.group(1)) if pos else 0)
        grid[a1][d] = code
    fig, ax = plt.subplots(figsize=(5.4, 4.4))
    image = ax.imshow(grid, origin="lower", cmap="viridis")
    ax.set_xlabel("d mod 9")
    ax.set_ylabel("a1 mod 9")
    ax.set_xticks(range(9))
    ax.set_yticks(range(9))
    ax.set_title(
        "first failing constraint per residue pair, pattern (3,n,3,3)",
        fontsize=9,
    )
    bar = fig.colorbar(image, ax=ax)
    bar.set_label("1 = primitivity, k+2 = position k residue")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return True


_FIGURES = (
    ("admissible-survivors.png", figure_survivors),
    ("power-progressions.png", figure_progressions),
    ("torsion-curves.png", figure_torsion_curves),
    ("mod9-cases.png", figure_mod9_grid),
)


def render_figures(document: dict, out_dir) -> list[Path]:
    """Render every figure whose claim data is present; return the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for filename, draw in _FIGURES:
        target = out / filename
        if draw(document, target):
            written.append(target)
    return written
