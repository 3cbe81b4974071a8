"""Bounded exhaustive search for primitive power progressions.

Empirical companion to the symbolic engine: tabulate every perfect power up
to a height bound, enumerate the maximal primitive non-constant arithmetic
progressions through that table, and check the harvest against the engine's
admissible pattern sets.  Search output is evidence, never proof; the engine
owns the impossibility arguments.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import partial
from math import gcd
from typing import Iterable, Sequence, Union

from .arith import PowerWitness, is_prime
from .engine import Alphabet, Pattern, enumerate_admissible
from .parallel import pmap, resolve_workers

MAX_SEARCH_BOUND = 10**8

TRIVIAL_VALUES = (-1, 0, 1)

AlphabetLike = Union[Alphabet, Iterable[int]]


@dataclass(frozen=True)
class Progression:
    """A primitive non-constant AP whose terms are all perfect powers.

    decompositions[i] lists one witness per exponent that represents
    terms[i]; every term carries at least one.
    """

    first: int
    diff: int
    terms: tuple[int, ...]
    decompositions: tuple[tuple[PowerWitness, ...], ...]

    def __post_init__(self) -> None:
        if self.diff == 0:
            raise ValueError("progression must be non-constant")
        if len(self.terms) < 2:
            raise ValueError("progression needs at least two terms")
        expected = tuple(
            self.first + k * self.diff for k in range(len(self.terms))
        )
        if self.terms != expected:
            raise ValueError("terms do not follow first + k*diff")
        if gcd(self.first, self.diff) != 1:
            raise ValueError("progression is not primitive")
        if len(self.decompositions) != len(self.terms):
            raise ValueError("one decomposition tuple per term required")
        for term, witnesses in zip(self.terms, self.decompositions):
            if not witnesses:
                raise ValueError(f"term {term} has no power decomposition")
            for witness in witnesses:
                if witness.value != term:
                    raise ValueError(
                        f"witness for {witness.value} attached to term {term}"
                    )

    @property
    def length(self) -> int:
        return len(self.terms)

    @property
    def trivial_positions(self) -> tuple[int, ...]:
        """1-based positions whose value is -1, 0, or 1."""
        return tuple(
            pos
            for pos, term in enumerate(self.terms, start=1)
            if term in TRIVIAL_VALUES
        )

    def exponents_at(self, pos: int) -> tuple[int, ...]:
        """Exponents that represent the 1-based position pos."""
        if not 1 <= pos <= len(self.terms):
            raise ValueError(f"position {pos} outside 1..{len(self.terms)}")
        return tuple(w.exponent for w in self.decompositions[pos - 1])

    def to_json(self) -> dict:
        return {
            "first": self.first,
            "diff": self.diff,
            "length": self.length,
            "terms": list(self.terms),
            "trivial_positions": list(self.trivial_positions),
        }


def exponent_values(alphabet: AlphabetLike, n_value: int | None = None) -> tuple[int, ...]:
    """Concrete exponent set searched, with n_value filling a symbolic slot."""
    if isinstance(alphabet, Alphabet):
        values = [s.value for s in alphabet.symbols if not s.is_symbolic]
        symbolic = [s for s in alphabet.symbols if s.is_symbolic]
        if symbolic:
            if n_value is None:
                raise ValueError(
                    f"alphabet '{alphabet.name}' has a symbolic exponent, pass n_value"
                )
            if not is_prime(n_value) or n_value < symbolic[0].min_prime:
                raise ValueError(
                    f"n_value must be a prime >= {symbolic[0].min_prime}, got {n_value}"
                )
            values.append(n_value)
        elif n_value is not None:
            raise ValueError(
                f"alphabet '{alphabet.name}' has no symbolic exponent, n_value does not apply"
            )
    else:
        if n_value is not None:
            raise ValueError("n_value applies only to alphabets with a symbolic slot")
        values = list(alphabet)
        for value in values:
            if not isinstance(value, int) or value < 2:
                raise ValueError(f"exponents must be integers >= 2, got {value!r}")
    if not values:
        raise ValueError("empty exponent set")
    return tuple(sorted(set(values)))


def power_table(
    exponents: Sequence[int], bound: int
) -> dict[int, tuple[PowerWitness, ...]]:
    """Every integer v with |v| <= bound that is an e-th power, with witnesses.

    Built by walking bases upward per exponent, so membership is exact and
    each (value, exponent) pair gets its canonical witness.
    """
    if bound < 1:
        raise ValueError("bound must be positive")
    table: dict[int, dict[int, PowerWitness]] = {}

    def put(value: int, exponent: int, base: int) -> None:
        table.setdefault(value, {})[exponent] = PowerWitness(value, exponent, base)

    for e in sorted(set(exponents)):
        if e < 2:
            raise ValueError(f"exponents must be at least 2, got {e}")
        base = 0
        while base**e <= bound:
            put(base**e, e, base)
            if e % 2 == 1 and base:
                put(-(base**e), e, -base)
            base += 1
    return {
        value: tuple(per_exp[e] for e in sorted(per_exp))
        for value, per_exp in table.items()
    }


def _scan_pairs(
    values: tuple[int, ...], min_len: int, index_range: tuple[int, int]
) -> list[tuple[int, int, int]]:
    """Maximal progressions seeded from first-term indices in index_range.

    Returns bare (first, diff, length) triples; witnesses are attached by the
    caller, which still holds the full table.
    """
    members = set(values)
    lo, hi = index_range
    found: list[tuple[int, int, int]] = []
    for i in range(lo, hi):
        a1 = values[i]
        for a2 in values[i + 1 :]:
            d = a2 - a1
            if gcd(a1, d) != 1:
                continue
            if a1 - d in members:
                continue  # extends left: reported from the earlier start
            length = 2
            last = a2
            while last + d in members:
                last += d
                length += 1
            if length >= min_len:
                found.append((a1, d, length))
    return found


def find_progressions(
    alphabet: AlphabetLike,
    n_value: int | None = None,
    *,
    bound: int,
    min_len: int = 3,
    workers: int | None = None,
) -> list[Progression]:
    """All maximal primitive non-constant APs of powers up to the bound.

    Orientation is canonical: diff > 0, so a progression and its reverse are
    reported once.  Sorted by (length descending, first, diff).
    """
    if not 1 <= bound <= MAX_SEARCH_BOUND:
        raise ValueError(f"bound must be between 1 and {MAX_SEARCH_BOUND}")
    if min_len < 3:
        raise ValueError("min_len must be at least 3")
    exponents = exponent_values(alphabet, n_value)
    table = power_table(exponents, bound)
    values = tuple(sorted(table))

    count = resolve_workers(workers)
    if count == 1 or len(values) < 64:
        triples = _scan_pairs(values, min_len, (0, len(values)))
    else:
        # early indices own longer inner loops, so use many small chunks
        edges = [
            (len(values) * k) // (4 * count) for k in range(4 * count + 1)
        ]
        ranges = [
            (lo, hi) for lo, hi in zip(edges, edges[1:]) if lo < hi
        ]
        chunks = pmap(partial(_scan_pairs, values, min_len), ranges, workers=count)
        triples = [t for chunk in chunks for t in chunk]

    triples.sort(key=lambda t: (-t[2], t[0], t[1]))
    results = []
    for first, diff, length in triples:
        terms = tuple(first + k * diff for k in range(length))
        decomps = tuple(table[t] for t in terms)
        results.append(Progression(first, diff, terms, decomps))
    return results


def classify(
    progression: Progression,
    alphabet: Alphabet,
    n_value: int | None = None,
) -> tuple[Pattern, ...]:
    """Exponent patterns over the alphabet consistent with the decompositions.

    Terms valued in {-1, 0, 1} admit every exponent that has a witness, so
    they fan out; see Progression.trivial_positions for the flags.  Sorted by
    label tuple.
    """
    label_of: dict[int, str] = {}
    for symbol in alphabet.symbols:
        if symbol.is_symbolic:
            if n_value is not None:
                label_of[n_value] = symbol.label
        else:
            label_of[symbol.value] = symbol.label
    choices = []
    for pos in range(1, progression.length + 1):
        labels = sorted(
            {
                label_of[e]
                for e in progression.exponents_at(pos)
                if e in label_of
            }
        )
        if not labels:
            return ()
        choices.append(labels)
    return tuple(
        alphabet.pattern(*combo) for combo in itertools.product(*choices)
    )


def progression_record(
    progression: Progression,
    alphabet: Alphabet,
    n_value: int | None = None,
) -> dict:
    """JSON-ready record with the pattern assignments filled in."""
    record = progression.to_json()
    record["patterns"] = [
        list(p.labels) for p in classify(progression, alphabet, n_value)
    ]
    return record


@dataclass(frozen=True)
class CrossCheckReport:
    """Outcome of confronting search results with engine admissibility."""

    alphabet: str
    total: int
    checked: int
    violations: tuple[Progression, ...]

    @property
    def consistent(self) -> bool:
        return not self.violations


def cross_check(
    progressions: Sequence[Progression],
    alphabet: Alphabet,
    n_value: int | None = None,
    workers: int | None = None,
) -> CrossCheckReport:
    """Verify every fully non-trivial progression of length >= 4 is admissible.

    A violation would contradict one of the classification theorems, so the
    caller should treat any as a hard error.  Progressions of length 3, or
    touching -1, 0, or 1, carry no engine verdict and are skipped.
    """
    candidates = [
        p
        for p in progressions
        if p.length >= 4 and not p.trivial_positions
    ]
    admissible_by_length: dict[int, set[tuple[str, ...]]] = {}
    for length in sorted({p.length for p in candidates}):
        admissible_by_length[length] = {
            pat.labels
            for pat in enumerate_admissible(alphabet, length, workers=workers)
        }
    violations = []
    for progression in candidates:
        patterns = classify(progression, alphabet, n_value)
        allowed = admissible_by_length[progression.length]
        if not any(pat.labels in allowed for pat in patterns):
            violations.append(progression)
    return CrossCheckReport(
        alphabet=alphabet.name,
        total=len(progressions),
        checked=len(candidates),
        violations=tuple(violations),
    )
