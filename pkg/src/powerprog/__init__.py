"""Primitive arithmetic progressions of mixed perfect powers.

Pattern pruning engine, exact number field arithmetic, quartic and cubic
curve scans, a brute-force progression search, and a verification report
tying them together.
"""

from __future__ import annotations

from .arith import PowerWitness, int_nth_root, is_prime, kth_power_base
from .curves import (
    CubicModelQ,
    LiftOutcome,
    ProgressionCandidate,
    QuarticModel,
    TorsionPoint,
    UndeterminedSquareness,
    add_points,
    family_curve,
    make_quartic,
    quartic_lift,
    scan_quartic,
    scan_rational_points_Q,
    torsion_over_Q,
    torsion_to_progression,
)
from .engine import (
    Alphabet,
    EnumerationResult,
    ExponentSymbol,
    MaxLengthReport,
    Pattern,
    PruneCertificate,
    PruneResult,
    Relation,
    Ruleset,
    cube_progression_mod9,
    delete_rule,
    derive_relation,
    enumerate_admissible,
    enumerate_detailed,
    exhaustive_residue_check,
    make_alphabet,
    make_ruleset,
    match_rule,
    max_admissible_length,
    prune,
    squares_progression_mod5,
    weaken_rule_bound,
)
from .identities import IdentityError, IdentityReport, verify_all
from .numfield import (
    ALPHA,
    BETA,
    K_SPEC,
    L_SPEC,
    UNDETERMINED,
    FieldElement,
    FieldSpec,
    SquareCertificate,
    element,
    nf_exact_div,
    nf_is_square,
    nf_norm,
    scalar,
)
from .parallel import resolve_workers
from .report import ClaimResult, RunConfig, run_claims, run_report
from .search import (
    CrossCheckReport,
    Progression,
    classify,
    cross_check,
    find_progressions,
    progression_record,
)

__version__ = "0.1.0"

__all__ = [
    "ALPHA",
    "Alphabet",
    "BETA",
    "ClaimResult",
    "CrossCheckReport",
    "CubicModelQ",
    "EnumerationResult",
    "ExponentSymbol",
    "FieldElement",
    "FieldSpec",
    "IdentityError",
    "IdentityReport",
    "K_SPEC",
    "L_SPEC",
    "LiftOutcome",
    "MaxLengthReport",
    "Pattern",
    "PowerWitness",
    "Progression",
    "ProgressionCandidate",
    "PruneCertificate",
    "PruneResult",
    "QuarticModel",
    "Relation",
    "RunConfig",
    "Ruleset",
    "SquareCertificate",
    "TorsionPoint",
    "UNDETERMINED",
    "UndeterminedSquareness",
    "add_points",
    "classify",
    "cross_check",
    "cube_progression_mod9",
    "delete_rule",
    "derive_relation",
    "element",
    "enumerate_admissible",
    "enumerate_detailed",
    "exhaustive_residue_check",
    "family_curve",
    "find_progressions",
    "int_nth_root",
    "is_prime",
    "kth_power_base",
    "make_alphabet",
    "make_quartic",
    "make_ruleset",
    "match_rule",
    "max_admissible_length",
    "nf_exact_div",
    "nf_is_square",
    "nf_norm",
    "prune",
    "progression_record",
    "quartic_lift",
    "resolve_workers",
    "run_claims",
    "run_report",
    "scalar",
    "scan_quartic",
    "scan_rational_points_Q",
    "squares_progression_mod5",
    "torsion_over_Q",
    "torsion_to_progression",
    "verify_all",
    "weaken_rule_bound",
]
