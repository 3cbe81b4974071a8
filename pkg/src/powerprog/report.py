"""Claim-by-claim verification runs and their serialized report documents.

Each claim re-checks one published statement and grades itself either
"exact-proof-replay" (finite algebra reproduced in full) or
"consistency-scan" (a bounded search standing in for a rank or Chabauty
computation that is consumed, not re-proved).  The JSON rendering is
byte-identical across reruns and worker counts: no timestamps, no
scheduling-dependent ordering, sorted keys throughout.
"""

from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .curves import (
    family_curve,
    make_quartic,
    quartic_lift,
    scan_quartic,
    scan_rational_points_Q,
    torsion_over_Q,
    torsion_to_progression,
)
from .engine import (
    Pattern,
    Ruleset,
    cube_progression_mod9,
    exhaustive_residue_check,
    form_residues,
    make_alphabet,
    make_ruleset,
    prune,
    squares_progression_mod5,
    weaken_rule_bound,
)
from .identities import IdentityError, octic_form, verify_all
from .numfield import ALPHA, BETA, K_SPEC, element, nf_norm, scalar
from .parallel import pmap
from .search import cross_check, find_progressions, progression_record

SCHEMA_VERSION = "v1"
EVIDENCE_EXACT = "exact-proof-replay"
EVIDENCE_SCAN = "consistency-scan"

# X-coordinate catalogs established by elliptic Chabauty; scans must
# reproduce them exactly and find nothing else below the height cutoff.
EXPECTED_X_SETS = {"C1": ("-1/3", "1"), "C2": ("1",), "C3": ("0",)}

EXPECTED_SURVIVORS = {
    "2n": (6, ("2,2,2,n,n,2", "2,n,n,2,2,2")),
    "25": (4, ("2,2,2,5", "5,2,2,2")),
    "3n": (4, ("3,3,n,n", "3,n,n,3", "n,3,3,n", "n,n,3,3")),
}

# The {2, n} sieve instantiated at the unproved bound n >= 5 must leave
# (2,n,2,2,n,2) standing: the X^e + 4Y^e = 3Z^2 rule only applies from
# e = 7 on.  A rule tampered below its literature bound fails here.
FRONTIER_SURVIVORS = ("2,2,2,n,n,2", "2,n,2,2,n,2", "2,n,n,2,2,2")

TORSION_TABLES = {
    "134": (
        (None, None, 1),
        (-12, 0, 2),
        (-6, -6, 4),
        (-6, 6, 4),
        (-4, 0, 2),
        (-3, 0, 2),
        (0, -12, 4),
        (0, 12, 4),
    ),
    "145": (
        (None, None, 1),
        (-20, 0, 2),
        (-8, -12, 4),
        (-8, 12, 4),
        (-5, 0, 2),
        (-4, 0, 2),
        (0, -20, 4),
        (0, 20, 4),
    ),
}

_FAMILY_POSITIONS = {"134": (0, 1, 3, 4), "145": (0, 1, 4, 5)}


@dataclass(frozen=True)
class RunConfig:
    """Parameters of a full verification run.

    Defaults reproduce the acceptance suite.  The tamper fields exist to
    demonstrate that the report catches a corrupted rule catalog; they
    weaken or unsoundly strengthen one relation rule's exponent bound.
    """

    search_bound: int = 10**6
    scan_height: int = 10**3
    point_height: int = 10**3
    precision: int = 120
    workers: int | None = None
    tamper_rule: str | None = None
    tamper_min_exponent: int | None = None

    def __post_init__(self) -> None:
        if not 1 <= self.search_bound <= 10**8:
            raise ValueError("search_bound must lie in 1..10^8")
        if not 1 <= self.scan_height <= 10**4:
            raise ValueError("scan_height must lie in 1..10^4")
        if not 1 <= self.point_height <= 10**6:
            raise ValueError("point_height must lie in 1..10^6")
        if self.precision < 53:
            raise ValueError("precision must be at least 53 bits")
        if (self.tamper_rule is None) != (self.tamper_min_exponent is None):
            raise ValueError(
                "tamper_rule and tamper_min_exponent must be given together"
            )
        if self.tamper_min_exponent is not None and self.tamper_min_exponent < 2:
            raise ValueError("tamper_min_exponent must be at least 2")

    def to_json(self) -> dict:
        # worker count deliberately omitted: the document must not depend
        # on scheduling
        data = {
            "search_bound": self.search_bound,
            "scan_height": self.scan_height,
            "point_height": self.point_height,
            "precision": self.precision,
        }
        if self.tamper_rule is not None:
            data["tamper"] = {
                "rule": self.tamper_rule,
                "min_exponent": self.tamper_min_exponent,
            }
        return data


_CONFIG_KEYS = (
    "search_bound",
    "scan_height",
    "point_height",
    "precision",
    "workers",
    "tamper_rule",
    "tamper_min_exponent",
)


def config_from_mapping(data: Mapping) -> RunConfig:
    """Build a RunConfig from a parsed JSON object, rejecting unknown keys."""
    unknown = sorted(set(data) - set(_CONFIG_KEYS))
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(unknown)}")
    return RunConfig(**dict(data))


@dataclass(frozen=True)
class ClaimResult:
    """Outcome of re-checking one published claim."""

    claim_id: str
    statement: str
    citation: str
    evidence: str
    status: str
    notes: tuple[str, ...] = ()
    artifacts: Mapping = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.status not in ("pass", "fail"):
            raise ValueError("status must be 'pass' or 'fail'")
        if self.evidence not in (EVIDENCE_EXACT, EVIDENCE_SCAN):
            raise ValueError("unknown evidence level")

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {
            "id": self.claim_id,
            "statement": self.statement,
            "citation": self.citation,
            "evidence": self.evidence,
            "status": self.status,
            "notes": list(self.notes),
            "artifacts": dict(self.artifacts),
        }


def _claim(claim_id, statement, citation, evidence, ok, artifacts, notes=()):
    return ClaimResult(
        claim_id=claim_id,
        statement=statement,
        citation=citation,
        evidence=evidence,
        status="pass" if ok else "fail",
        notes=tuple(notes),
        artifacts=artifacts,
    )


# ---------------------------------------------------------------------------
# pattern enumeration claims


def _prune_with(ruleset: Ruleset, pattern: Pattern):
    return prune(pattern, ruleset)


def _ruleset_for(name: str, config: RunConfig, nmin: int | None = None) -> Ruleset:
    ruleset = make_ruleset(make_alphabet(name, nmin))
    if config.tamper_rule is not None:
        try:
            ruleset = weaken_rule_bound(
                ruleset, config.tamper_rule, config.tamper_min_exponent
            )
        except KeyError:
            pass  # rule not in this alphabet's catalog; nothing to tamper
    return ruleset


def _sieve(ruleset: Ruleset, length: int, workers: int | None):
    patterns = [
        Pattern(symbols)
        for symbols in itertools.product(ruleset.alphabet.symbols, repeat=length)
    ]
    results = pmap(
        functools.partial(_prune_with, ruleset), patterns, workers=workers
    )
    survivors = [",".join(r.pattern.labels) for r in results if r.admissible]
    kills = [r.certificate for r in results if r.certificate is not None]
    return survivors, kills


_PATTERN_CITATIONS = {
    "2n": (
        "Bennett-Skinner; Bruin (signature (n, n, 2)); Darmon-Merel "
        "(n, n, n); Fermat-Euler (four squares in progression); rank-zero "
        "curve torsion and elliptic Chabauty over Q(2^(1/5)) for the "
        "window curves.  Each prune certificate carries its own citation."
    ),
    "25": (
        "Bennett-Skinner; Bruin and Darmon-Merel at exponent 5; "
        "Fermat-Euler; elliptic Chabauty over Q(2^(1/5)) and Q(sqrt 5) "
        "for the mixed windows.  Each prune certificate carries its own "
        "citation."
    ),
    "3n": (
        "Darmon-Merel (n, n, n); Bennett-Vatsal-Yazdani (n, n, 3); "
        "cube residues mod 9 for the two-stage rule.  Each prune "
        "certificate carries its own citation."
    ),
}

_PATTERN_STATEMENTS = {
    "2n": (
        "Primitive non-constant progressions of squares and prime n-th "
        "powers (n >= 7) have length at most 6, and exactly the patterns "
        "(2,2,2,n,n,2) and (2,n,n,2,2,2) survive at length 6."
    ),
    "25": (
        "Primitive non-constant progressions of squares and fifth powers "
        "have length at most 4, and exactly the patterns (2,2,2,5) and "
        "(5,2,2,2) survive at length 4."
    ),
    "3n": (
        "Primitive non-constant progressions of cubes and prime n-th "
        "powers (n >= 5) have length at most 4, with survivors "
        "(3,3,n,n), (3,n,n,3), (n,3,3,n) and (n,n,3,3)."
    ),
}


def check_patterns(name: str, config: RunConfig) -> ClaimResult:
    """Replay the admissible-pattern enumeration for one alphabet."""
    length, expected = EXPECTED_SURVIVORS[name]
    ruleset = _ruleset_for(name, config)
    by_length = {}
    kill_summary = {}
    replayed = True
    for t in range(3, length + 2):
        survivors, kills = _sieve(ruleset, t, config.workers)
        by_length[str(t)] = survivors
        rules_used = sorted({c.rule_id for c in kills})
        kill_summary[str(t)] = {"pruned": len(kills), "rules": rules_used}
        if t == length and config.tamper_rule is None:
            # certificates must re-verify from stored data alone; a
            # tampered catalog cannot replay and is judged on survivors
            replayed = all(c.replay() for c in kills)
    ok = tuple(by_length[str(length)]) == expected
    ok = ok and by_length[str(length + 1)] == []
    artifacts = {
        "alphabet": name,
        "observation_length": length,
        "survivors_by_length": by_length,
        "kills_by_length": kill_summary,
        "expected": list(expected),
    }
    return _claim(
        f"patterns-{name}",
        _PATTERN_STATEMENTS[name],
        _PATTERN_CITATIONS[name],
        EVIDENCE_EXACT,
        ok and replayed,
        artifacts,
    )


def check_bound_frontier(config: RunConfig) -> ClaimResult:
    """The {2, n} sieve at the unproved bound n >= 5 must not over-prune."""
    ruleset = _ruleset_for("2n", config, nmin=5)
    survivors, _ = _sieve(ruleset, 6, config.workers)
    ok = tuple(survivors) == FRONTIER_SURVIVORS
    return _claim(
        "bound-frontier-2n",
        "Instantiated at n >= 5 the squares/n-th-powers sieve leaves "
        "(2,n,2,2,n,2) standing at length 6: the rule X^e + 4Y^e = 3Z^2 "
        "holds only from e = 7 and must stay silent below it.",
        "Bennett-Skinner; Bruin: the (n, n, 2) result for X^e + 4Y^e = "
        "3Z^2 requires prime e >= 7; no literature kills the e = 5 case "
        "of that template.",
        EVIDENCE_EXACT,
        ok,
        {
            "alphabet": "2n",
            "nmin": 5,
            "length": 6,
            "survivors": survivors,
            "expected": list(FRONTIER_SURVIVORS),
        },
    )


# ---------------------------------------------------------------------------
# identity and norm-table claims


def check_identity_suite(config: RunConfig) -> ClaimResult:
    try:
        reports = verify_all()
        ok = all(r.status == "holds" for r in reports)
        artifacts = {"identities": [r.to_json() for r in reports]}
        notes = ()
    except IdentityError as exc:
        ok = False
        artifacts = {"error": str(exc)}
        notes = ("identity expansion aborted",)
    return _claim(
        "identity-suite",
        "The factorization, square-sum, splitting, discriminant and "
        "progression-relation identities all expand to exact equalities "
        "over their coefficient rings.",
        "Pink-Tengely (parametrization of x^2 + y^2 = 2z^5); the rest are "
        "elementary expansions over Z[alpha] and Z[beta] re-derived here.",
        EVIDENCE_EXACT,
        ok,
        artifacts,
        notes,
    )


def check_norm_table(config: RunConfig) -> ClaimResult:
    a = ALPHA
    unit5 = element(K_SPEC, (-3, -6, -1, 4, 3))
    cofactor3 = element(K_SPEC, (1, -1, 1, -1, 1))
    norms = {
        "alpha-1": (nf_norm(a - 1), 1),
        "alpha^3+alpha+1": (nf_norm(element(K_SPEC, (1, 1, 0, 1, 0))), 1),
        "alpha+1": (nf_norm(a + 1), 3),
        "alpha^2+1": (nf_norm(a * a + 1), 5),
        "alpha^4-alpha^3+alpha^2-alpha+1": (nf_norm(cofactor3), 81),
    }
    ok = all(got == want for got, want in norms.values())
    fact3 = (a + 1) * cofactor3 == scalar(K_SPEC, 3)
    fact5 = unit5 * (a * a + 1) ** 5 == scalar(K_SPEC, 5)
    unit5_norm = nf_norm(unit5)
    ok = ok and fact3 and fact5 and unit5_norm == 1
    beta_norm = nf_norm(BETA)
    artifacts = {
        "norms": {k: str(got) for k, (got, _) in norms.items()},
        "factorization_3": "3 = (alpha+1)(alpha^4-alpha^3+alpha^2-alpha+1)",
        "factorization_3_verified": fact3,
        "factorization_5": "5 = (3*alpha^4+4*alpha^3-alpha^2-6*alpha-3)"
        "(alpha^2+1)^5",
        "factorization_5_verified": fact5,
        "unit_factor_norm": str(unit5_norm),
        "beta_norm_computed": str(beta_norm),
        "beta_norm_stated": "1",
    }
    notes = (
        "computed N(beta) = -1 where the source table states 1; beta is a "
        "fundamental unit either way, and the computed value is reported "
        "unchanged",
    )
    return _claim(
        "norm-table",
        "The unit and prime data in Q(2^(1/5)): fundamental units have "
        "norm 1, N(alpha+1) = 3, N(alpha^2+1) = 5, the quartic cofactor "
        "has norm 81, and 3 and 5 factor as recorded.",
        "Unit group and prime factorizations in Z[2^(1/5)], standard "
        "computer algebra facts, re-verified here by exact arithmetic.",
        EVIDENCE_EXACT,
        ok,
        artifacts,
        notes,
    )


# ---------------------------------------------------------------------------
# curve claims


_CURVE_KNOWN_POINTS = {
    "C1": {
        "1": (1, 1, 1, 1, 1),
        "-1/3": ("5/9", "1/3", "-1/9", "5/9", "1/3"),
    },
    "C2": {"1": (1, 0, 0, 0, 0)},
    "C3": {"0": (1, 0)},
}

_CURVE_STATEMENTS = {
    "C1": "The only rational X with a point on alpha^4 X^4 + alpha^3 X^3 "
    "+ alpha^2 X^2 + alpha X + 1 = (alpha - 1) Y^2 are X = 1 and "
    "X = -1/3, with the recorded Y-coordinates.",
    "C2": "The only rational X with a point on alpha^4 X^4 - alpha^3 X^3 "
    "+ alpha^2 X^2 - alpha X + 1 = (alpha^4 - alpha^3 + alpha^2 - "
    "alpha + 1) Y^2 is X = 1, with Y = +-1.",
    "C3": "The only rational X with a point on the quartic X^4 + "
    "(8 beta - 12) X^3 + (16 beta - 30) X^2 + (8 beta - 12) X + 1 = Y^2 "
    "over Q(sqrt 5) meeting the coprimality side condition is X = 0.",
}


def check_curve(name: str, config: RunConfig) -> ClaimResult:
    model = make_quartic(name)
    outcomes = scan_quartic(
        model, config.scan_height, workers=config.workers,
        precision=config.precision,
    )
    found = tuple(sorted(str(o.X) for o in outcomes))
    expected = tuple(sorted(EXPECTED_X_SETS[name]))
    ok = found == expected
    # the published Y-coordinates must replay exactly, not just lift
    for x_str, coords in _CURVE_KNOWN_POINTS[name].items():
        lift = quartic_lift(
            model, Fraction(x_str), precision=config.precision
        )
        want = element(model.spec, tuple(Fraction(c) for c in coords))
        ok = ok and lift.square and lift.roots[0] == want
    return _claim(
        f"curve-{name}",
        _CURVE_STATEMENTS[name],
        "Elliptic Chabauty computation, consumed as an external result; "
        "the bounded scan checks consistency and the listed points are "
        "replayed exactly.",
        EVIDENCE_SCAN,
        ok,
        {
            "curve": name,
            "height": config.scan_height,
            "x_found": list(found),
            "x_expected": list(expected),
            "points": [o.to_json() for o in outcomes],
        },
    )


def check_torsion(family: str, config: RunConfig) -> ClaimResult:
    curve = family_curve(_FAMILY_POSITIONS[family])
    points = torsion_over_Q(curve)
    table = tuple((t.u, t.v, t.order) for t in points)
    ok = table == TORSION_TABLES[family]
    rejections = []
    for point in points:
        cand = torsion_to_progression(point, curve)
        ok = ok and not cand.accepted and bool(cand.reason)
        rejections.append(cand.to_json())
    derived_note = (
        ()
        if family == "134"
        else ("torsion table derived here; recorded as computed data, "
              "not as a published table",)
    )
    offsets = ",".join(str(p) for p in _FAMILY_POSITIONS[family])
    return _claim(
        f"torsion-{family}",
        f"The curve attached to squares at offsets ({offsets}) has "
        "exactly eight torsion points and none of them yields a "
        "primitive non-constant progression.",
        "Lutz-Nagell with reduction-count cross-checks; progression "
        "reconstruction is elementary arithmetic on the curve model.",
        EVIDENCE_EXACT,
        ok,
        {
            "family": family,
            "model": curve.to_json(),
            "points": [t.to_json() for t in points],
            "progression_attempts": rejections,
        },
        derived_note,
    )


def check_rank_scan(family: str, config: RunConfig) -> ClaimResult:
    curve = family_curve(_FAMILY_POSITIONS[family])
    torsion_affine = {
        (t.u, t.v) for t in torsion_over_Q(curve) if not t.is_infinity
    }
    found = scan_rational_points_Q(
        curve, config.point_height, workers=config.workers
    )
    extra = sorted(
        (str(u), str(v)) for u, v in found if (u, v) not in torsion_affine
    )
    ok = not extra and len(found) == len(torsion_affine)
    return _claim(
        f"rank-scan-{family}",
        "A bounded rational-point scan on the window curve finds the "
        "seven affine torsion points and nothing else, consistent with "
        "rank zero.",
        "Rank-zero claim consumed as an external descent computation; "
        "scan evidence only.",
        EVIDENCE_SCAN,
        ok,
        {
            "family": family,
            "height": config.point_height,
            "points_found": [[str(u), str(v)] for u, v in found],
            "non_torsion": [list(pair) for pair in extra],
        },
    )


# ---------------------------------------------------------------------------
# search claims


def check_search_mixed(config: RunConfig) -> ClaimResult:
    alphabet = make_alphabet("25")
    progressions = find_progressions(
        alphabet, bound=config.search_bound, workers=config.workers
    )
    records = [progression_record(p, alphabet) for p in progressions]
    landmarks = []
    for terms in ([-1, 0, 1], [9, 3125, 6241]):
        hit = next((r for r in records if r["terms"] == terms), None)
        landmarks.append(
            {"terms": terms, "found": hit is not None, "record": hit}
        )
    report = cross_check(progressions, alphabet, workers=config.workers)
    ok = all(mark["found"] for mark in landmarks) and report.consistent
    return _claim(
        "search-25",
        "Bounded search over squares and fifth powers finds the trivial "
        "(-1, 0, 1) and the sporadic (9, 3125, 6241), and every fully "
        "non-trivial progression of length >= 4 matches an admissible "
        "pattern (there are none).",
        "Exhaustive enumeration below the bound; cross-checked against "
        "the admissible-pattern catalog.",
        EVIDENCE_SCAN,
        ok,
        {
            "alphabet": "25",
            "bound": config.search_bound,
            "total": len(records),
            "max_length": max((r["length"] for r in records), default=0),
            "landmarks": landmarks,
            "cross_check": {
                "checked": report.checked,
                "violations": [list(v) for v in report.violations],
            },
            "progressions": records,
        },
    )


def check_search_squares(config: RunConfig) -> ClaimResult:
    found = find_progressions(
        [2], bound=config.search_bound, min_len=4, workers=config.workers
    )
    ok = found == []
    return _claim(
        "search-squares",
        "No four perfect squares below the bound form a non-constant "
        "primitive arithmetic progression.",
        "Fermat's claim, proved by Euler: four distinct squares never "
        "lie in arithmetic progression.",
        EVIDENCE_SCAN,
        ok,
        {
            "alphabet": "2",
            "bound": config.search_bound,
            "min_len": 4,
            "found": [progression_record(p, [2]) for p in found],
        },
    )


# ---------------------------------------------------------------------------
# residue claims


def check_residue_mod9(config: RunConfig) -> ClaimResult:
    alphabet = make_alphabet("3n")
    ruleset = _ruleset_for("3n", config)
    targets = {
        "3,n,3,3": ("3", "n", "3", "3"),
        "3,3,n,3": ("3", "3", "n", "3"),
        "3,3,n,n,3": ("3", "3", "n", "n", "3"),
    }
    cases = {}
    ok = True
    for label, letters in targets.items():
        pattern = alphabet.pattern(*letters)
        result = prune(pattern, ruleset)
        cert = result.certificate
        good = (
            cert is not None
            and cert.rule_id == "rel-33n-2zn"
            and cert.residue_modulus == 9
            and cert.residue_cases == 81
            and cert.residue_transcript is not None
            and len(cert.residue_transcript) == 81
            and cert.replay()
        )
        ok = ok and good
        cases[label] = {
            "pruned": cert is not None,
            "certificate": None if cert is None else cert.to_json(),
            "transcript": list(cert.residue_transcript or ())
            if cert is not None
            else [],
        }
    stride_positions = cases["3,3,n,n,3"]["certificate"]
    ok = ok and stride_positions is not None and stride_positions[
        "positions"
    ] == [1, 3, 5]
    return _claim(
        "residue-mod9",
        "The cube patterns (3,n,3,3) and (3,3,n,3), and the stride-2 "
        "triple inside (3,3,n,n,3), admit no residue assignment mod 9: "
        "all 81 cases fail.",
        "Cubes lie in {0, 1, 8} mod 9; the two-stage rule first forces "
        "3 | Z via the X^3 + Y^3 = 2Z^e factorization "
        "(Bennett-Vatsal-Yazdani; Darmon-Merel at e = 3).",
        EVIDENCE_EXACT,
        ok,
        {"cases": cases},
    )


def check_residue_mod4(config: RunConfig) -> ClaimResult:
    values = form_residues(octic_form(), 4, odd_sum_only=True)
    unrestricted = form_residues(octic_form(), 4)
    ok = values == frozenset({1})
    return _claim(
        "residue-mod4",
        "The degree-eight form takes only the value 1 mod 4 on pairs "
        "with u + v odd, so its square values force the parity pattern "
        "used by the splitting argument.",
        "Elementary residue scan of the octic form over Z/4.",
        EVIDENCE_EXACT,
        ok,
        {
            "modulus": 4,
            "odd_sum_values": sorted(values),
            "unrestricted_values": sorted(unrestricted),
        },
    )


def check_residue_mod5(config: RunConfig) -> ClaimResult:
    alphabet = make_alphabet("25")
    pattern = alphabet.pattern("2", "2", "5", "2")
    constraints = squares_progression_mod5(pattern, 1)
    outcome = exhaustive_residue_check(5, constraints)
    ok = (
        not outcome.satisfiable
        and outcome.cases_checked == 25
        and len(outcome.transcript) == 25
    )
    return _claim(
        "residue-mod5",
        "If 5 divides the first square term of a (2,2,5,2) block, no "
        "residue assignment mod 5 is consistent: nearby squares must be "
        "units in {1, 4} and all 25 cases fail.",
        "Elementary: squares coprime to 5 lie in {1, 4} mod 5; "
        "primitivity keeps 5 from dividing two terms at distance < 5.",
        EVIDENCE_EXACT,
        ok,
        {
            "modulus": 5,
            "constraints": {
                str(pos): sorted(residues)
                for pos, residues in constraints.allowed.items()
            },
            "cases_checked": outcome.cases_checked,
            "satisfiable": outcome.satisfiable,
            "transcript": list(outcome.transcript),
        },
    )


# ---------------------------------------------------------------------------
# the full run


_CLAIM_BUILDERS = (
    lambda cfg: check_patterns("2n", cfg),
    lambda cfg: check_patterns("25", cfg),
    lambda cfg: check_patterns("3n", cfg),
    check_bound_frontier,
    check_identity_suite,
    check_norm_table,
    lambda cfg: check_curve("C1", cfg),
    lambda cfg: check_curve("C2", cfg),
    lambda cfg: check_curve("C3", cfg),
    lambda cfg: check_torsion("134", cfg),
    lambda cfg: check_torsion("145", cfg),
    lambda cfg: check_rank_scan("134", cfg),
    lambda cfg: check_rank_scan("145", cfg),
    check_search_mixed,
    check_search_squares,
    check_residue_mod9,
    check_residue_mod4,
    check_residue_mod5,
)


def run_claims(config: RunConfig) -> list[ClaimResult]:
    """Evaluate every claim; aggregation is order-independent by id sort."""
    claims = [build(config) for build in _CLAIM_BUILDERS]
    claims.sort(key=lambda c: c.claim_id)
    ids = [c.claim_id for c in claims]
    if len(set(ids)) != len(ids):
        raise RuntimeError("claim ids must be unique")
    return claims


def build_document(config: RunConfig, claims: list[ClaimResult]) -> dict:
    passed = sum(1 for c in claims if c.passed)
    flagged = sum(1 for c in claims if c.notes)
    return {
        "version": SCHEMA_VERSION,
        "tool": "powerprog",
        "config": config.to_json(),
        "claims": [c.to_json() for c in claims],
        "summary": {
            "claims": len(claims),
            "passed": passed,
            "failed": len(claims) - passed,
            "flagged_notes": flagged,
            "status": "pass" if passed == len(claims) else "fail",
        },
    }


def render_json(document: dict) -> str:
    return json.dumps(document, sort_keys=True, indent=2) + "\n"


def render_markdown(document: dict) -> str:
    lines = [
        "# Verification report",
        "",
        f"Schema version: {document['version']}",
        "",
        "## Configuration",
        "",
        "```json",
        json.dumps(document["config"], sort_keys=True, indent=2),
        "```",
        "",
        "## Summary",
        "",
        "| claims | passed | failed | flagged notes | status |",
        "| --- | --- | --- | --- | --- |",
    ]
    s = document["summary"]
    lines.append(
        f"| {s['claims']} | {s['passed']} | {s['failed']} "
        f"| {s['flagged_notes']} | {s['status']} |"
    )
    lines.append("")
    lines.append("## Claims")
    for claim in document["claims"]:
        lines.append("")
        lines.append(f"### {claim['id']} — {claim['status']}")
        lines.append("")
        lines.append(f"- evidence: {claim['evidence']}")
        lines.append(f"- statement: {claim['statement']}")
        lines.append(f"- citation: {claim['citation']}")
        for note in claim["notes"]:
            lines.append(f"- note: {note}")
        lines.append("")
        lines.append("```json")
        lines.append(json.dumps(claim["artifacts"], sort_keys=True, indent=2))
        lines.append("```")
    lines.append("")
    return "\n".join(lines)


def render_delimited(claims: list[ClaimResult]) -> str:
    """One tab-delimited line per claim: id, status, evidence, note count."""
    rows = ["\t".join(("claim", "status", "evidence", "notes"))]
    for claim in claims:
        rows.append(
            "\t".join(
                (claim.claim_id, claim.status, claim.evidence,
                 str(len(claim.notes)))
            )
        )
    return "\n".join(rows) + "\n"


def first_failure_certificate(claims: list[ClaimResult]) -> str | None:
    """Printable certificate of the first failing claim, if any."""
    for claim in claims:
        if not claim.passed:
            payload = {
                "failed_claim": claim.claim_id,
                "statement": claim.statement,
                "artifacts": dict(claim.artifacts),
            }
            return json.dumps(payload, sort_keys=True, indent=2)
    return None


def run_report(config: RunConfig) -> tuple[int, dict]:
    """Evaluate all claims and assemble the document; 0 exit iff all pass."""
    claims = run_claims(config)
    document = build_document(config, claims)
    exit_code = 0 if document["summary"]["status"] == "pass" else 1
    return exit_code, document
