"""Command line front end tying the modules into reproducible runs.

Exit codes: 0 on success, 1 when a verification check fails (the first
failure's certificate goes to stderr), 2 on usage errors.  The report
subcommand writes a JSON document, a markdown mirror, a tab-delimited
claim table and the figures into an output directory.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .curves import (
    UndeterminedSquareness,
    family_curve,
    make_quartic,
    scan_quartic,
    torsion_over_Q,
    torsion_to_progression,
)
from .engine import enumerate_detailed, make_alphabet
from .identities import IdentityError, verify_all
from .report import (
    EXPECTED_X_SETS,
    RunConfig,
    build_document,
    config_from_mapping,
    first_failure_certificate,
    render_delimited,
    render_json,
    render_markdown,
    run_claims,
)
from .search import find_progressions, progression_record

_FAMILY_POSITIONS = {"134": (0, 1, 3, 4), "145": (0, 1, 4, 5)}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="powerprog",
        description="verify facts about arithmetic progressions of "
        "mixed perfect powers",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("identities", help="expand the identity suite")
    p.add_argument("--json", action="store_true", help="emit a JSON list")

    p = sub.add_parser("patterns", help="sieve exponent patterns")
    p.add_argument("--alphabet", required=True, choices=("2n", "25", "3n"))
    p.add_argument("--length", required=True, type=int)
    p.add_argument(
        "--nmin",
        type=int,
        help="lower bound for the symbolic prime exponent",
    )
    p.add_argument("--workers", type=int)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("search", help="enumerate power progressions")
    p.add_argument(
        "--alphabet",
        required=True,
        help="'2n', '25', '3n', or comma-separated exponents like '2,5'",
    )
    p.add_argument(
        "--n",
        type=int,
        help="concrete prime value for a symbolic exponent",
    )
    p.add_argument("--bound", required=True, type=int)
    p.add_argument("--min-len", type=int, default=3)
    p.add_argument("--workers", type=int)
    p.add_argument(
        "--json",
        action="store_true",
        help="stream newline-delimited JSON records",
    )

    p = sub.add_parser("curves", help="scan a quartic for field points")
    p.add_argument("--scan", required=True, choices=("C1", "C2", "C3"))
    p.add_argument("--height", required=True, type=int)
    p.add_argument("--precision", type=int, default=120)
    p.add_argument("--workers", type=int)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("torsion", help="torsion points of a window curve")
    p.add_argument("--family", required=True, choices=("134", "145"))
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("report", help="run the full verification suite")
    p.add_argument("--out", default="powerprog-report", help="output directory")
    p.add_argument("--format", choices=("json", "markdown"), default="json")
    p.add_argument("--config", help="JSON config file; flags override it")
    p.add_argument("--workers", type=int)
    p.add_argument("--search-bound", type=int)
    p.add_argument("--scan-height", type=int)
    p.add_argument("--point-height", type=int)
    p.add_argument("--precision", type=int)
    p.add_argument("--tamper-rule", help="rule id to corrupt (demo)")
    p.add_argument("--tamper-min-exponent", type=int)
    p.add_argument(
        "--no-figures",
        action="store_true",
        help="skip PNG rendering; only the text artifacts are written",
    )
    return parser


def cmd_identities(args) -> int:
    try:
        reports = verify_all()
    except IdentityError as exc:
        print(f"identity check failed: {exc}", file=sys.stderr)
        return 1
    if args.json:
        print(json.dumps([r.to_json() for r in reports], indent=2))
    else:
        for r in reports:
            print(f"{r.identity_id}: {r.status} — {r.statement}")
    return 0


def cmd_patterns(args) -> int:
    alphabet = make_alphabet(args.alphabet, args.nmin)
    result = enumerate_detailed(alphabet, args.length, workers=args.workers)
    survivors = [",".join(p.labels) for p in result.survivors]
    if args.json:
        payload = {
            "alphabet": args.alphabet,
            "nmin": alphabet.nmin,
            "length": args.length,
            "survivors": survivors,
            "pruned": [c.to_json() for c in result.certificates],
        }
        print(json.dumps(payload, indent=2))
    else:
        for line in survivors:
            print(line)
        print(
            f"{len(survivors)} admissible, "
            f"{len(result.certificates)} pruned"
        )
    return 0


def _parse_search_alphabet(args):
    if args.alphabet in ("2n", "25", "3n"):
        return make_alphabet(args.alphabet), args.n
    try:
        exponents = tuple(int(x) for x in args.alphabet.split(","))
    except ValueError:
        raise ValueError(
            f"alphabet {args.alphabet!r} is neither a named alphabet nor "
            "a comma-separated exponent list"
        ) from None
    return exponents, args.n


def cmd_search(args) -> int:
    alphabet, n_value = _parse_search_alphabet(args)
    progressions = find_progressions(
        alphabet,
        n_value,
        bound=args.bound,
        min_len=args.min_len,
        workers=args.workers,
    )
    for prog in progressions:
        record = progression_record(prog, alphabet, n_value)
        if args.json:
            print(json.dumps(record, sort_keys=True))
        else:
            terms = ", ".join(str(t) for t in record["terms"])
            pats = (
                " ".join(",".join(p) for p in record["patterns"]) or "none"
            )
            print(
                f"[{terms}] diff={record['diff']} patterns: {pats}"
            )
    if not args.json:
        print(f"{len(progressions)} progressions", file=sys.stderr)
    return 0


def cmd_curves(args) -> int:
    model = make_quartic(args.scan)
    outcomes = scan_quartic(
        model, args.height, workers=args.workers, precision=args.precision
    )
    found = {str(o.X) for o in outcomes}
    evidence = (
        "verified" if found == set(EXPECTED_X_SETS[args.scan]) else "scan"
    )
    if args.json:
        payload = {
            "curve": args.scan,
            "height": args.height,
            "points": [
                {"X": str(o.X), "Y": o.roots[0].to_json()["coords"]}
                for o in outcomes
            ],
            "evidence_level": evidence,
        }
        print(json.dumps(payload, indent=2))
    else:
        for o in outcomes:
            coords = ", ".join(o.roots[0].to_json()["coords"])
            print(f"X = {o.X}: Y = ({coords})")
        print(f"evidence: {evidence}")
    return 0


def cmd_torsion(args) -> int:
    curve = family_curve(_FAMILY_POSITIONS[args.family])
    points = torsion_over_Q(curve)
    rows = []
    for point in points:
        candidate = torsion_to_progression(point, curve)
        entry = point.to_json()
        entry["progression"] = candidate.to_json()
        rows.append(entry)
    if args.json:
        payload = {
            "family": args.family,
            "model": curve.to_json(),
            "points": rows,
        }
        print(json.dumps(payload, indent=2))
    else:
        print(curve.to_json()["model"])
        for entry in rows:
            where = (
                "infinity"
                if "point" in entry
                else f"({entry['u']}, {entry['v']})"
            )
            reason = entry["progression"]["reason"]
            print(f"{where} order {entry['order']}: {reason}")
    return 0


def _report_config(args) -> RunConfig:
    base: dict = {}
    if args.config:
        text = Path(args.config).read_text(encoding="utf-8")
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ValueError("config file must hold a JSON object")
        base.update(data)
    overrides = {
        "search_bound": args.search_bound,
        "scan_height": args.scan_height,
        "point_height": args.point_height,
        "precision": args.precision,
        "workers": args.workers,
        "tamper_rule": args.tamper_rule,
        "tamper_min_exponent": args.tamper_min_exponent,
    }
    base.update({k: v for k, v in overrides.items() if v is not None})
    return config_from_mapping(base)


def cmd_report(args) -> int:
    config = _report_config(args)
    claims = run_claims(config)
    document = build_document(config, claims)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_text(
        render_json(document), encoding="utf-8"
    )
    (out_dir / "report.md").write_text(
        render_markdown(document), encoding="utf-8"
    )
    (out_dir / "claims.tsv").write_text(
        render_delimited(claims), encoding="utf-8"
    )
    if not args.no_figures:
        from .plots import render_figures  # deferred: pulls in matplotlib

        render_figures(document, out_dir / "figures")

    if args.format == "markdown":
        print(render_markdown(document))
    else:
        print(render_json(document), end="")

    certificate = first_failure_certificate(claims)
    if certificate is not None:
        print(certificate, file=sys.stderr)
        return 1
    return 0


_HANDLERS = {
    "identities": cmd_identities,
    "patterns": cmd_patterns,
    "search": cmd_search,
    "curves": cmd_curves,
    "torsion": cmd_torsion,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.subcommand](args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except UndeterminedSquareness as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
