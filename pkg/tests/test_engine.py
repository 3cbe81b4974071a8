"""Engine tests: alphabets, relation matching, residue scans, enumeration."""

from __future__ import annotations

import dataclasses
import itertools
import random

import pytest

from powerprog.engine import (
    ExponentSymbol,
    Pattern,
    cube_progression_mod9,
    delete_rule,
    derive_relation,
    enumerate_admissible,
    enumerate_detailed,
    exhaustive_residue_check,
    form_residues,
    make_alphabet,
    make_ruleset,
    match_rule,
    max_admissible_length,
    prune,
    squares_progression_mod5,
    weaken_rule_bound,
    ResidueConstraints,
)
from powerprog.identities import octic_form, quartic_g_over_L


def labels(patterns):
    return [",".join(p.labels) for p in patterns]


# Expected classifications, frozen after hand-checking the rule firings.
TWO_N_T6 = ["2,2,2,n,n,2", "2,n,n,2,2,2"]
TWO_FIVE_T4 = ["2,2,2,5", "5,2,2,2"]
THREE_N_T4 = ["3,3,n,n", "3,n,n,3", "n,3,3,n", "n,n,3,3"]

TWO_N_T5 = [
    "2,2,2,n,2",
    "2,2,2,n,n",
    "2,2,n,n,2",
    "2,n,2,2,2",
    "2,n,n,2,2",
    "n,n,2,2,2",
]

# pattern -> (rule id, positions) for every rejected length-4 tuple over {2, 5}
TWO_FIVE_KILLS = {
    "2,2,2,2": ("sub-squares-ap4", (1, 2, 3, 4)),
    "2,2,5,2": ("sub-chabauty-2252", (1, 2, 3, 4)),
    "2,2,5,5": ("sub-chabauty-2255", (1, 2, 3, 4)),
    "2,5,2,2": ("sub-chabauty-2522", (1, 2, 3, 4)),
    "2,5,2,5": ("rel-nn2-2z2", (2, 3, 4)),
    "2,5,5,2": ("sub-chabauty-2552", (1, 2, 3, 4)),
    "2,5,5,5": ("rel-nnn-2zn", (2, 3, 4)),
    "5,2,2,5": ("sub-chabauty-5225", (1, 2, 3, 4)),
    "5,2,5,2": ("rel-nn2-2z2", (1, 2, 3)),
    "5,2,5,5": ("rel-nn2-2z2", (1, 2, 3)),
    "5,5,2,2": ("sub-chabauty-5522", (1, 2, 3, 4)),
    "5,5,2,5": ("rel-nn2-2z2", (2, 3, 4)),
    "5,5,5,2": ("rel-nnn-2zn", (1, 2, 3)),
    "5,5,5,5": ("rel-nnn-2zn", (1, 2, 3)),
}


def test_alphabet_construction():
    a2n = make_alphabet("2n")
    assert a2n.nmin == 7
    assert [s.label for s in a2n.symbols] == ["2", "n"]
    assert make_alphabet("2n", 11).nmin == 11
    a25 = make_alphabet("25")
    assert a25.nmin is None
    assert [s.label for s in a25.symbols] == ["2", "5"]
    a3n = make_alphabet("3n")
    assert a3n.nmin == 5
    assert [s.label for s in a3n.symbols] == ["3", "n"]

    with pytest.raises(ValueError):
        make_alphabet("25", 7)
    with pytest.raises(ValueError):
        make_alphabet("23")
    with pytest.raises(ValueError):
        make_alphabet("2n", 4)
    with pytest.raises(ValueError):
        make_alphabet("2n", 9)


def test_exponent_symbol_validation():
    with pytest.raises(ValueError):
        ExponentSymbol()
    with pytest.raises(ValueError):
        ExponentSymbol(value=2, min_prime=7)
    with pytest.raises(ValueError):
        ExponentSymbol.concrete(7)
    with pytest.raises(ValueError):
        ExponentSymbol.symbolic(3)
    sym = ExponentSymbol.symbolic(7)
    assert sym.label == "n" and sym.is_odd and sym.is_symbolic


def test_pattern_basics():
    a2n = make_alphabet("2n")
    pat = a2n.pattern(2, "n", "n", 2)
    assert len(pat) == 4
    assert pat.labels == ("2", "n", "n", "2")
    assert str(pat) == "(2,n,n,2)"
    assert pat.to_json() == ["2", "n", "n", "2"]
    assert pat.reverse().labels == ("2", "n", "n", "2")
    assert pat.symbol_at(2).is_symbolic
    with pytest.raises(ValueError):
        pat.symbol_at(0)
    with pytest.raises(ValueError):
        pat.symbol_at(5)
    with pytest.raises(ValueError):
        a2n.pattern(2, 3)
    # two distinct symbolic bounds cannot share a pattern
    with pytest.raises(ValueError):
        Pattern((ExponentSymbol.symbolic(5), ExponentSymbol.symbolic(7)))


def test_derive_relation_describe():
    a2n = make_alphabet("2n")
    a25 = make_alphabet("25")
    rel = derive_relation(a2n.pattern("n", 2, "n"), 1, 2, 3)
    assert rel.describe() == "x1^n + x3^n = 2*x2^2"
    assert rel.coefficients == (1, 1, 2)
    rel = derive_relation(a2n.pattern("n", 2, 2, "n", 2), 1, 4, 5)
    assert rel.describe() == "x1^n + 3*x5^2 = 4*x4^n"
    rel = derive_relation(a25.pattern(5, 2, 2, 5), 1, 2, 4)
    assert rel.describe() == "2*x1^5 + x4^5 = 3*x2^2"
    # stride two reduces to the consecutive weights
    rel = derive_relation(a2n.pattern("n", 2, 2, 2, "n"), 1, 3, 5)
    assert rel.coefficients == (1, 1, 2)

    pat = a2n.pattern(2, 2, 2)
    for bad in ((1, 1, 2), (0, 1, 2), (2, 1, 3), (1, 2, 4)):
        with pytest.raises(ValueError):
            derive_relation(pat, *bad)


def test_derive_relation_invariants():
    # weights stay reduced and mirror under pattern reversal
    rng = random.Random(9001)
    a2n = make_alphabet("2n")
    for _ in range(200):
        t = rng.randint(3, 8)
        pat = a2n.pattern(*[rng.choice(["2", "n"]) for _ in range(t)])
        i, j, k = sorted(rng.sample(range(1, t + 1), 3))
        rel = derive_relation(pat, i, j, k)
        p, q, r = rel.coefficients
        assert p + q == r
        assert p >= 1 and q >= 1
        from math import gcd

        assert gcd(p, q) == 1
        mirrored = derive_relation(
            pat.reverse(), t + 1 - k, t + 1 - j, t + 1 - i
        )
        assert mirrored.coefficients == (q, p, r)


def test_match_rule_bindings():
    a2n = make_alphabet("2n")
    rs2n = make_ruleset(a2n)

    rel = derive_relation(a2n.pattern(2, "n", 2, 2, "n"), 1, 2, 5)
    assert rel.describe() == "3*x1^2 + x5^n = 4*x2^n"
    m = match_rule(rel, rs2n)
    assert m is not None and m.rule_id == "rel-nn2-3z2"
    assert m.substitution_dict == {"X": "-x5", "Y": "x2", "Z": "x1", "e": "n"}
    assert not m.two_stage and m.forced_position is None

    rel = derive_relation(a2n.pattern("n", 2, 2, "n", 2), 1, 4, 5)
    m = match_rule(rel, rs2n)
    assert m.rule_id == "rel-nn2-3z2"
    assert m.substitution_dict == {"X": "-x1", "Y": "x4", "Z": "x5", "e": "n"}

    rel = derive_relation(a2n.pattern("n", 2, "n"), 1, 2, 3)
    m = match_rule(rel, rs2n)
    assert m.rule_id == "rel-nn2-2z2"
    assert m.substitution_dict == {"X": "x1", "Y": "x3", "Z": "x2", "e": "n"}

    rel = derive_relation(a2n.pattern("n", "n", "n"), 1, 2, 3)
    m = match_rule(rel, rs2n)
    assert m.rule_id == "rel-nnn-2zn"

    # squares alone satisfy no template
    rel = derive_relation(a2n.pattern(2, 2, 2), 1, 2, 3)
    assert match_rule(rel, rs2n) is None

    # the cube rule matches and reports its forced branch
    a3n = make_alphabet("3n")
    rel = derive_relation(a3n.pattern(3, "n", 3), 1, 2, 3)
    m = match_rule(rel, make_ruleset(a3n))
    assert m.rule_id == "rel-33n-2zn"
    assert m.two_stage and m.forced_position == 2
    assert m.substitution_dict == {"X": "x1", "Y": "x3", "Z": "x2", "e": "n"}


def test_symbolic_bound_gates_rules():
    # at n >= 5 the X^e + 4*Y^e = 3*Z^2 template must stay silent
    weak = make_alphabet("2n", 5)
    rs = make_ruleset(weak)
    rel = derive_relation(weak.pattern(2, "n", 2, 2, "n"), 1, 2, 5)
    assert match_rule(rel, rs) is None
    for t in range(3, 7):
        for cert in enumerate_detailed(weak, t).certificates:
            assert cert.rule_id != "rel-nn2-3z2"
    assert labels(enumerate_admissible(weak, 6)) == [
        "2,2,2,n,n,2",
        "2,n,2,2,n,2",
        "2,n,n,2,2,2",
    ]


def test_cube_residues_mod9():
    a3n = make_alphabet("3n")
    pat = a3n.pattern(3, "n", 3, 3)
    constraints = cube_progression_mod9(pat, forced_position=2)
    assert constraints.allowed[1] == frozenset({0, 1, 8})
    assert constraints.allowed[2] == frozenset({0})
    assert constraints.primitivity_modulus == 3
    free = cube_progression_mod9(pat)
    assert free.allowed[2] == frozenset({0, 1, 2, 4, 5, 7, 8})

    out = exhaustive_residue_check(9, constraints)
    assert not out.satisfiable
    assert out.cases_checked == 81 and len(out.transcript) == 81
    assert out.transcript[0].startswith("a1=0 d=0:")

    out = exhaustive_residue_check(
        9, cube_progression_mod9(a3n.pattern(3, 3, "n", 3), forced_position=3)
    )
    assert not out.satisfiable and out.cases_checked == 81

    # without the forced vanishing the scan finds the constant class
    out = exhaustive_residue_check(
        9, cube_progression_mod9(a3n.pattern(3, 3, "n", "n"))
    )
    assert out.satisfiable and out.witness == (1, 0)
    assert out.cases_checked == 10
    assert out.transcript[-1] == "a1=1 d=0: satisfies every constraint"


def test_residue_check_validation():
    with pytest.raises(ValueError):
        exhaustive_residue_check(1, ResidueConstraints(2, {}))
    with pytest.raises(ValueError):
        exhaustive_residue_check(
            9, ResidueConstraints(2, {}, primitivity_modulus=5)
        )
    with pytest.raises(ValueError):
        ResidueConstraints(2, {3: {0}})
    with pytest.raises(ValueError):
        exhaustive_residue_check(5, ResidueConstraints(2, {1: {7}}))


def test_squares_block_mod5():
    a25 = make_alphabet("25")
    pat = a25.pattern(2, 2, 5, 2)
    constraints = squares_progression_mod5(pat, 1)
    assert constraints.allowed == {
        1: frozenset({0}),
        2: frozenset({1, 4}),
        4: frozenset({1, 4}),
    }
    out = exhaustive_residue_check(5, constraints)
    assert not out.satisfiable and out.cases_checked == 25


def test_form_residues_mod4():
    octic = octic_form()
    assert form_residues(octic, 4, odd_sum_only=True) == frozenset({1})
    everything = form_residues(octic, 4)
    assert 0 in everything
    with pytest.raises(ValueError):
        form_residues(quartic_g_over_L(), 4)


def test_two_n_enumeration():
    a2n = make_alphabet("2n")
    assert labels(enumerate_admissible(a2n, 6)) == TWO_N_T6
    assert enumerate_admissible(a2n, 7) == []
    assert labels(enumerate_admissible(a2n, 5)) == TWO_N_T5
    t3 = enumerate_detailed(a2n, 3)
    assert labels(t3.survivors) == [
        "2,2,2",
        "2,2,n",
        "2,n,2",
        "2,n,n",
        "n,2,2",
        "n,n,2",
    ]
    kills = {",".join(c.pattern.labels): c.rule_id for c in t3.certificates}
    assert kills == {"n,2,n": "rel-nn2-2z2", "n,n,n": "rel-nnn-2zn"}
    with pytest.raises(ValueError):
        enumerate_admissible(a2n, 0)
    with pytest.raises(ValueError):
        enumerate_admissible(a2n, 13)


def test_two_n_attributions():
    a2n = make_alphabet("2n")
    certs = {
        ",".join(c.pattern.labels): c
        for c in enumerate_detailed(a2n, 6).certificates
    }
    spot = {
        "2,n,2,2,n,2": ("rel-nn2-3z2", (1, 2, 5)),
        "n,2,2,n,2,2": ("rel-nn2-3z2", (1, 4, 5)),
        "2,2,n,n,2,2": ("sub-curve-0145", (1, 2, 5, 6)),
        "2,2,2,2,2,2": ("sub-curve-0134", (1, 2, 4, 5)),
        "n,2,2,2,2,n": ("sub-squares-ap4", (2, 3, 4, 5)),
        "2,2,2,n,2,n": ("rel-nn2-2z2", (4, 5, 6)),
        "n,n,n,2,2,2": ("rel-nnn-2zn", (1, 2, 3)),
    }
    for key, (rule_id, positions) in spot.items():
        assert certs[key].rule_id == rule_id
        assert certs[key].positions == positions
    # five-letter windows of six-letter survivors must themselves survive
    t5 = set(labels(enumerate_admissible(a2n, 5)))
    for survivor in TWO_N_T6:
        parts = survivor.split(",")
        assert ",".join(parts[:5]) in t5
        assert ",".join(parts[1:]) in t5

    result = prune(a2n.pattern(2, 2, "n", 2, 2), make_ruleset(a2n))
    assert result.certificate.rule_id == "sub-curve-0134"
    assert result.certificate.positions == (1, 2, 4, 5)


def test_two_five_enumeration():
    a25 = make_alphabet("25")
    detail = enumerate_detailed(a25, 4)
    assert labels(detail.survivors) == TWO_FIVE_T4
    assert enumerate_admissible(a25, 5) == []
    seen = {
        ",".join(c.pattern.labels): (c.rule_id, c.positions)
        for c in detail.certificates
    }
    assert seen == TWO_FIVE_KILLS

    # one-step extensions of the survivors die at specific places
    certs5 = {
        ",".join(c.pattern.labels): c
        for c in enumerate_detailed(a25, 5).certificates
    }
    assert certs5["5,2,2,2,5"].rule_id == "rel-nn2-2z2"
    assert certs5["5,2,2,2,5"].positions == (1, 3, 5)
    assert certs5["2,2,2,5,2"].rule_id == "sub-chabauty-2252"
    assert certs5["2,2,2,5,2"].positions == (2, 3, 4, 5)


def test_three_n_enumeration():
    a3n = make_alphabet("3n")
    assert labels(enumerate_admissible(a3n, 4)) == THREE_N_T4
    assert enumerate_admissible(a3n, 5) == []
    certs4 = {
        ",".join(c.pattern.labels): c
        for c in enumerate_detailed(a3n, 4).certificates
    }
    cert = certs4["3,n,3,3"]
    assert cert.rule_id == "rel-33n-2zn" and cert.positions == (1, 2, 3)
    assert cert.residue_modulus == 9 and cert.residue_cases == 81
    cert = certs4["3,3,n,3"]
    assert cert.rule_id == "rel-33n-2zn" and cert.positions == (2, 3, 4)
    certs5 = {
        ",".join(c.pattern.labels): c
        for c in enumerate_detailed(a3n, 5).certificates
    }
    cert = certs5["3,3,n,n,3"]
    assert cert.rule_id == "rel-33n-2zn" and cert.positions == (1, 3, 5)
    assert len(cert.residue_transcript) == 81


def test_reversal_closure():
    for name, lengths in (("2n", (3, 4, 5, 6)), ("25", (3, 4, 5)), ("3n", (3, 4, 5))):
        alphabet = make_alphabet(name)
        for t in lengths:
            survivors = set(labels(enumerate_admissible(alphabet, t)))
            flipped = {
                ",".join(reversed(s.split(","))) for s in survivors
            }
            assert survivors == flipped


def test_prune_monotone_under_extension():
    a2n = make_alphabet("2n")
    ruleset = make_ruleset(a2n)
    detail = enumerate_detailed(a2n, 4)
    for cert in detail.certificates:
        for letter in ("2", "n"):
            left = a2n.pattern(letter, *cert.pattern.labels)
            right = a2n.pattern(*cert.pattern.labels, letter)
            assert not prune(left, ruleset).admissible
            assert not prune(right, ruleset).admissible


def test_certificates_replay():
    collections = [
        enumerate_detailed(make_alphabet("2n"), 6).certificates,
        enumerate_detailed(make_alphabet("25"), 4).certificates,
        enumerate_detailed(make_alphabet("3n"), 5).certificates,
    ]
    for certs in collections:
        for cert in certs:
            assert cert.replay(), f"replay failed for {cert.pattern}"
            payload = cert.to_json()
            assert payload["rule"] == cert.rule_id
            assert payload["positions"] == list(cert.positions)
            assert payload["citation"] and payload["note"]


def test_certificate_tampering_detected():
    a2n = make_alphabet("2n")
    certs = {
        ",".join(c.pattern.labels): c
        for c in enumerate_detailed(a2n, 6).certificates
    }
    relation_cert = certs["2,n,2,2,n,2"]
    assert relation_cert.rule_id == "rel-nn2-3z2"
    assert not dataclasses.replace(relation_cert, positions=(1, 2, 4)).replay()
    assert not dataclasses.replace(relation_cert, citation="elsewhere").replay()
    assert not dataclasses.replace(relation_cert, rule_id="rel-nn2-2z2").replay()
    assert not dataclasses.replace(relation_cert, rule_id="rel-nowhere").replay()

    sub_cert = certs["2,2,2,2,2,2"]
    assert sub_cert.rule_id == "sub-curve-0134"
    assert not dataclasses.replace(sub_cert, positions=(2, 3, 5, 6)).replay()

    a3n = make_alphabet("3n")
    cube_cert = next(
        c
        for c in enumerate_detailed(a3n, 4).certificates
        if c.rule_id == "rel-33n-2zn"
    )
    assert not dataclasses.replace(cube_cert, residue_cases=80).replay()


def test_ruleset_catalog():
    assert make_ruleset(make_alphabet("2n")).rule_ids() == (
        "rel-nn2-2z2",
        "rel-nn2-3z2",
        "rel-nnn-2zn",
        "sub-curve-0134",
        "sub-curve-0145",
        "sub-squares-ap4",
    )
    assert make_ruleset(make_alphabet("25")).rule_ids() == (
        "rel-nn2-2z2",
        "rel-nnn-2zn",
        "sub-chabauty-2252",
        "sub-chabauty-2255",
        "sub-chabauty-2522",
        "sub-chabauty-2552",
        "sub-chabauty-5225",
        "sub-chabauty-5522",
        "sub-curve-0134",
        "sub-curve-0145",
        "sub-squares-ap4",
    )
    rs3n = make_ruleset(make_alphabet("3n"))
    assert rs3n.rule_ids() == ("rel-33n-2zn", "rel-nn3-2z3", "rel-nnn-2zn")
    assert [r.rule_id for r in rs3n.stage_one] == [
        "rel-nn3-2z3",
        "rel-nnn-2zn",
    ]
    assert [r.rule_id for r in rs3n.stage_three] == ["rel-33n-2zn"]
    for name in ("2n", "25", "3n"):
        ruleset = make_ruleset(make_alphabet(name))
        for rule_id in ruleset.rule_ids():
            assert ruleset.rule_by_id(rule_id).citation
    with pytest.raises(KeyError):
        rs3n.rule_by_id("rel-none")


def test_rule_mutation_helpers():
    a2n = make_alphabet("2n")
    ruleset = make_ruleset(a2n)
    with pytest.raises(KeyError):
        weaken_rule_bound(ruleset, "rel-none", 11)
    with pytest.raises(KeyError):
        delete_rule(ruleset, "rel-none")

    # raising the exponent floor past nmin lets the n,2,n block through
    weakened = weaken_rule_bound(ruleset, "rel-nn2-2z2", 11)
    assert prune(a2n.pattern("n", 2, "n"), weakened).admissible
    assert not prune(a2n.pattern("n", "n", "n"), weakened).admissible

    # the offsets (0,1,3,4) rule is redundant for bare survivor sets: its
    # kills re-fire through the (0,1,4,5) curve and the four-squares rule
    thinned = delete_rule(ruleset, "sub-curve-0134")
    full = enumerate_admissible(a2n, 6)
    kept = [
        pat
        for pat in (
            Pattern(symbols)
            for symbols in itertools.product(a2n.symbols, repeat=6)
        )
        if prune(pat, thinned).admissible
    ]
    assert labels(kept) == labels(full)


def test_squares_rule_matches_any_stride():
    a2n = make_alphabet("2n")
    ruleset = make_ruleset(a2n)
    for rule_id in ("rel-nn2-2z2", "rel-nn2-3z2", "rel-nnn-2zn"):
        ruleset = delete_rule(ruleset, rule_id)
    pat = a2n.pattern(2, "n", 2, "n", 2, "n", 2)
    cert = prune(pat, ruleset).certificate
    assert cert.rule_id == "sub-squares-ap4"
    assert cert.positions == (1, 3, 5, 7)


def test_prune_rejects_foreign_pattern():
    a3n = make_alphabet("3n")
    rs2n = make_ruleset(make_alphabet("2n"))
    with pytest.raises(ValueError):
        prune(a3n.pattern(3, 3), rs2n)


def test_parallel_enumeration_matches_serial():
    a2n = make_alphabet("2n")
    serial = enumerate_detailed(a2n, 4)
    parallel = enumerate_detailed(a2n, 4, workers=2)
    assert labels(serial.survivors) == labels(parallel.survivors)
    assert [c.to_json() for c in serial.certificates] == [
        c.to_json() for c in parallel.certificates
    ]


def test_max_admissible_length():
    assert max_admissible_length(make_alphabet("2n"), 8).max_length == 6
    assert max_admissible_length(make_alphabet("25"), 8).max_length == 4
    report = max_admissible_length(make_alphabet("3n"), 8)
    assert report.max_length == 4 and not report.censored
    assert labels(report.survivors) == THREE_N_T4

    capped = max_admissible_length(make_alphabet("2n"), 5)
    assert capped.max_length == 5 and capped.censored
    with pytest.raises(ValueError):
        max_admissible_length(make_alphabet("2n"), 13)
