"""Search tests: power tables, maximal progression harvests, cross-checks."""

from __future__ import annotations

import random
from math import gcd

import pytest

from powerprog.arith import PowerWitness
from powerprog.engine import Alphabet, ExponentSymbol, make_alphabet
from powerprog.search import (
    CrossCheckReport,
    Progression,
    classify,
    cross_check,
    exponent_values,
    find_progressions,
    power_table,
    progression_record,
)

SQUARES_ONLY = Alphabet("2", (ExponentSymbol.concrete(2),))


def test_exponent_values():
    a25 = make_alphabet("25")
    a2n = make_alphabet("2n")
    assert exponent_values(a25) == (2, 5)
    assert exponent_values(a2n, 7) == (2, 7)
    assert exponent_values(a2n, 11) == (2, 11)
    assert exponent_values([5, 2, 2]) == (2, 5)
    with pytest.raises(ValueError):
        exponent_values(a25, 5)
    with pytest.raises(ValueError):
        exponent_values(a2n)
    with pytest.raises(ValueError):
        exponent_values(a2n, 9)
    with pytest.raises(ValueError):
        exponent_values(a2n, 5)
    with pytest.raises(ValueError):
        exponent_values([2], 5)
    with pytest.raises(ValueError):
        exponent_values([1, 2])
    with pytest.raises(ValueError):
        exponent_values([])


def test_power_table_witnesses():
    table = power_table((2, 5), 2000)
    assert [(w.exponent, w.base) for w in table[1024]] == [(2, 32), (5, 4)]
    assert [(w.exponent, w.base) for w in table[0]] == [(2, 0), (5, 0)]
    assert [(w.exponent, w.base) for w in table[-1]] == [(5, -1)]
    assert [(w.exponent, w.base) for w in table[-32]] == [(5, -2)]
    assert -4 not in table and 2000 not in table
    assert max(table) <= 2000 and min(table) >= -2000
    with pytest.raises(ValueError):
        power_table((2,), 0)
    with pytest.raises(ValueError):
        power_table((1,), 10)


def test_progression_validation():
    witness_rows = (
        (PowerWitness(1, 2, 1),),
        (PowerWitness(25, 2, 5),),
        (PowerWitness(49, 2, 7),),
    )
    good = Progression(1, 24, (1, 25, 49), witness_rows)
    assert good.length == 3
    assert good.trivial_positions == (1,)
    assert good.exponents_at(2) == (2,)
    with pytest.raises(ValueError):
        good.exponents_at(0)
    with pytest.raises(ValueError):
        Progression(1, 0, (1, 1, 1), witness_rows)
    with pytest.raises(ValueError):
        Progression(1, 24, (1, 25, 50), witness_rows)
    with pytest.raises(ValueError):
        Progression(0, 4, (0, 4, 8), witness_rows)
    with pytest.raises(ValueError):
        Progression(1, 24, (1, 25, 49), witness_rows[:2] + ((),))
    shuffled = (witness_rows[1], witness_rows[0], witness_rows[2])
    with pytest.raises(ValueError):
        Progression(1, 24, (1, 25, 49), shuffled)


def test_small_bound_over_two_five():
    a25 = make_alphabet("25")
    found = find_progressions(a25, bound=10)
    assert [(p.first, p.diff, p.terms) for p in found] == [
        (-1, 1, (-1, 0, 1)),
        (-1, 5, (-1, 4, 9)),
    ]
    neg = found[0]
    assert neg.trivial_positions == (1, 2, 3)
    assert [",".join(p.labels) for p in classify(neg, a25)] == [
        "5,2,2",
        "5,2,5",
        "5,5,2",
        "5,5,5",
    ]
    mixed = found[1]
    assert mixed.trivial_positions == (1,)
    assert [",".join(p.labels) for p in classify(mixed, a25)] == ["5,2,2"]


def test_classical_square_progression():
    found = find_progressions([2], bound=100)
    assert [(p.first, p.diff, p.terms) for p in found] == [(1, 24, (1, 25, 49))]
    assert [",".join(p.labels) for p in classify(found[0], SQUARES_ONLY)] == [
        "2,2,2"
    ]
    # decompositions witness only the searched exponents, so reading the
    # same progression over the mixed alphabet does not invent fifth powers
    assert [
        ",".join(p.labels) for p in classify(found[0], make_alphabet("25"))
    ] == ["2,2,2"]


def test_point_progression_found():
    a25 = make_alphabet("25")
    found = find_progressions(a25, bound=10**4)
    assert len(found) == 18
    assert all(p.length == 3 for p in found)
    hits = [p for p in found if p.terms == (9, 3125, 6241)]
    assert len(hits) == 1
    record = progression_record(hits[0], a25)
    assert record == {
        "first": 9,
        "diff": 3116,
        "length": 3,
        "terms": [9, 3125, 6241],
        "trivial_positions": [],
        "patterns": [["2", "5", "2"]],
    }


def test_guards():
    a25 = make_alphabet("25")
    with pytest.raises(ValueError):
        find_progressions(a25, bound=0)
    with pytest.raises(ValueError):
        find_progressions(a25, bound=10**8 + 1)
    with pytest.raises(ValueError):
        find_progressions(a25, bound=100, min_len=2)


def test_planted_square_progressions_recovered():
    # random primitive three-square progressions must always be retrieved,
    # and never extend: a fourth square in progression cannot exist
    rng = random.Random(20240817)
    tried = 0
    while tried < 12:
        p = rng.randint(2, 40)
        q = rng.randint(1, p - 1)
        if gcd(p, q) != 1 or (p + q) % 2 == 0:
            continue
        x = abs(p * p - 2 * p * q - q * q)
        y = p * p + q * q
        z = p * p + 2 * p * q - q * q
        terms = tuple(sorted((x * x, y * y, z * z)))
        d = terms[1] - terms[0]
        if terms[2] - terms[1] != d or d == 0 or gcd(terms[0], d) != 1:
            continue
        tried += 1
        bound = terms[2] + rng.randint(0, 50)
        found = find_progressions([2], bound=bound)
        assert any(f.terms == terms for f in found)
        assert all(f.length == 3 for f in found)


def test_desk_scale_consistency():
    a25 = make_alphabet("25")
    harvest = find_progressions(a25, bound=10**6)
    assert len(harvest) == 142
    assert max(p.length for p in harvest) == 3
    report = cross_check(harvest, a25)
    assert report == CrossCheckReport(
        alphabet="25", total=142, checked=0, violations=()
    )
    assert report.consistent

    assert find_progressions([2], bound=10**6, min_len=4) == []

    a3n = make_alphabet("3n")
    cubes = find_progressions(a3n, 7, bound=10**6)
    assert [(p.first, p.diff, p.terms) for p in cubes] == [(-1, 1, (-1, 0, 1))]
    assert cross_check(cubes, a3n, 7).consistent


def test_parallel_matches_serial():
    a25 = make_alphabet("25")
    serial = find_progressions(a25, bound=10**5)
    parallel = find_progressions(a25, bound=10**5, workers=3)
    assert len(serial) == 49
    assert [p.to_json() for p in serial] == [p.to_json() for p in parallel]
